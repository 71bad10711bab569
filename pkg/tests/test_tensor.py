import pytest
from hypothesis import given, settings, strategies as st

from qmink.coeff import GENERIC, ONE, Q, T, ZERO, integer
from qmink.intertwiners import operator_source
from qmink.tensor import (ArityMismatchError, B, SignatureMismatchError, TMap,
                          TypeMismatchError, U, annihilator_basis,
                          bar_conjugate, compose, flip, identity, invert,
                          nullspace_basis, permutation, place, row_echelon,
                          span_equal, tau_conjugate, tensor_product)

SRC = operator_source(GENERIC)


# ---------------------------------------------------------------------------
# independent oracle: dense Kronecker product on raw scalar matrices
# ---------------------------------------------------------------------------

def kron(a, b):
    return [[va * vb for va in ra for vb in rb]
            for ra in a for rb in b]


def ident(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mats_equal(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def test_place_adjacent_matches_kronecker():
    m = SRC.get("M")
    placed = place(m, (1, 2), (U, U, B))
    want = kron(m.entries, ident(2))
    assert mats_equal(placed.entries, want)
    placed = place(m, (2, 3), (B, U, U))
    want = kron(ident(2), m.entries)
    assert mats_equal(placed.entries, want)


def test_place_non_adjacent_matches_permuted_kronecker():
    m = SRC.get("M")
    placed = place(m, (1, 3), (U, B, U))
    # oracle: move leg 2 last, apply M x I, move back
    p = permutation((U, B, U), (1, 3, 2))
    direct = compose(invert(p), compose(place(m, (1, 2), (U, U, B)), p))
    assert placed.equals(direct)


def test_place_reordered_legs_transposes_the_operator():
    # acting on swapped legs equals conjugation by the leg flips
    x = SRC.get("X")
    swapped = place(x, (2, 1), (B, U))
    assert swapped.in_sig == (B, U) and swapped.out_sig == (U, B)
    direct = compose(flip(B, U), compose(x, flip(B, U)))
    assert swapped.equals(direct)


def test_place_identity_is_identity():
    placed = place(identity((U,)), (2,), (U, U, B))
    assert placed.equals(identity((U, U, B)))


def test_place_changes_bar_types():
    placed = place(SRC.get("X"), (2, 3), (U, U, B))
    assert placed.out_sig == (U, B, U)


def test_place_vector_insertion_matches_bookkeeping():
    # oracle: E at output legs 1,2 over a spectator leg, rebuilt by direct
    # index bookkeeping (rows (a,b,s), column s)
    e = SRC.get("E")
    placed = place(e, (), (B,), (1, 2))
    assert placed.in_sig == (B,)
    assert placed.out_sig == (U, U, B)
    expected = TMap.zero((B,), (U, U, B))
    for r4, row in enumerate(e.entries):
        for s in range(2):
            expected.entries[r4 * 2 + s][s] = row[0]
    assert placed.equals(expected)


def test_place_functional_drops_legs():
    ep = SRC.get("E'")
    placed = place(ep, (1, 2), (U, U, B))
    assert placed.out_sig == (B,)
    expected = TMap.zero((U, U, B), (B,))
    for c4, v in enumerate(ep.entries[0]):
        for s in range(2):
            expected.entries[s][c4 * 2 + s] = v
    assert placed.equals(expected)


def test_place_type_and_arity_errors():
    with pytest.raises(TypeMismatchError):
        place(SRC.get("M"), (1, 2), (U, B, U))
    with pytest.raises(ArityMismatchError):
        place(SRC.get("M"), (1,), (U, U))
    with pytest.raises(ArityMismatchError):
        place(SRC.get("E"), (), (U,))  # needs out_legs


def test_compose_signature_mismatch():
    with pytest.raises(SignatureMismatchError):
        compose(SRC.get("M"), SRC.get("X"))


def test_compose_identity_laws():
    x = SRC.get("X")
    assert compose(identity((B, U)), x).equals(x)
    assert compose(x, identity((U, B))).equals(x)


def test_place_respects_composition():
    x, xi = SRC.get("X"), SRC.get("X^-1")
    amb = (U, U, B)
    lhs = place(compose(xi, x), (2, 3), amb)
    rhs = compose(place(xi, (2, 3), place(x, (2, 3), amb).out_sig),
                  place(x, (2, 3), amb))
    assert lhs.equals(rhs)
    assert lhs.equals(identity(amb))


def test_contraction_scalar_oracle():
    # direct index contraction of the metric pair, no compose() involved
    e, ep = SRC.get("E"), SRC.get("E'")
    total = ZERO
    for k in range(4):
        total = total + ep.entries[0][k] * e.entries[k][0]
    got = compose(ep, e).entries[0][0]
    assert got == total
    assert got == -(Q + Q ** -1)


def test_projection_traces_equal_ranks():
    for name, rank in (("P", 1), ("P'", 3), ("Q", 1), ("Q'", 3), ("Pminus", 6)):
        p = SRC.get(name)
        assert compose(p, p).equals(p), name
        assert p.trace() == integer(rank), name


def test_annihilator_of_rank_one_projection_is_the_metric_functional():
    fs = annihilator_basis(SRC.get("P"))
    assert len(fs) == 1
    ep = SRC.get("E'")
    ratio = None
    for a, b in zip(fs[0].entries[0], ep.entries[0]):
        if b.is_zero():
            assert a.is_zero()
        else:
            r = a / b
            assert ratio is None or r == ratio
            ratio = r
    assert ratio is not None and not ratio.is_zero()


def test_annihilator_of_identity_has_full_rank():
    fs = annihilator_basis(identity((U, U)))
    assert len(fs) == 4


def test_annihilator_kills_kernel_and_has_full_rank():
    p = SRC.get("Pminus")
    fs = annihilator_basis(p)
    assert len(fs) == 6
    rows, _ = row_echelon([f.entries[0] for f in fs])
    assert len(rows) == 6
    for v in nullspace_basis(p):
        for f in fs:
            val = ZERO
            for k in range(16):
                val = val + f.entries[0][k] * v.entries[k][0]
            assert val.is_zero()


def test_nullspace_dimension():
    p = SRC.get("Pminus")
    assert len(nullspace_basis(p)) == 10


def test_span_equal_detects_differences():
    a = [[ONE, ZERO], [ZERO, ONE]]
    b = [[ONE, ONE], [ONE, -ONE]]
    c = [[ONE, ZERO]]
    assert span_equal(a, b)
    assert not span_equal(a, c)


def test_bar_conjugate_is_involutive():
    x = SRC.get("X")
    assert bar_conjugate(bar_conjugate(x)).equals(x)
    assert bar_conjugate(x).in_sig == (B, U)


def test_tau_conjugate_of_m_is_k():
    m, k = SRC.get("M"), SRC.get("K")
    assert tau_conjugate(m).equals(k)
    assert tau_conjugate(tau_conjugate(m)).equals(m)


def test_tau_conjugate_arity_error():
    with pytest.raises(ArityMismatchError):
        tau_conjugate(SRC.get("E"))


def test_invert_round_trip():
    x = SRC.get("X")
    xi = invert(x)
    assert xi.equals(SRC.get("X^-1"))
    with pytest.raises(ZeroDivisionError):
        invert(compose(SRC.get("E"), SRC.get("E'")))


def test_tensor_product_matches_kronecker():
    m, k = SRC.get("M"), SRC.get("K")
    tp = tensor_product(m, k)
    assert mats_equal(tp.entries, kron(m.entries, k.entries))
    assert tp.in_sig == (U, U, B, B)


def test_json_debug_serialization():
    d = SRC.get("X").to_json_dict()
    assert d["in_sig"] == ["u", "b"]
    assert d["out_sig"] == ["b", "u"]
    assert len(d["entries"]) == 4 and len(d["entries"][0]) == 4


# ---------------------------------------------------------------------------
# randomized structure properties
# ---------------------------------------------------------------------------

coeff_scalars = st.builds(lambda n: integer(n), st.integers(-3, 3))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), coeff_scalars),
                max_size=5))
def test_bar_conjugate_involution_on_random_maps(entries):
    m = TMap.zero((U, B), (U, B))
    for i, j, v in entries:
        m.entries[i][j] = m.entries[i][j] + v * Q + v * T
    assert bar_conjugate(bar_conjugate(m)).equals(m)
    assert tau_conjugate(tau_conjugate(m)).equals(m)
