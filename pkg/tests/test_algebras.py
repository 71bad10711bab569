import cmath
import random

import pytest

from qmink.algebras import (OracleUnverifiedError,
                            PAIR_NAMES, SpanMismatchError, braided_delta_check,
                            build_braided_square, build_crossed, crossed_reduce,
                            crossed_star_check, derived_relations, full_system,
                            minkowski_length, minkowski_length_poly,
                            minkowski_system, mz_presentation_check,
                            pbw_obstruction_generic, suite_classical,
                            suite_delta, suite_length, suite_pbw,
                            table_relations, x_alphabet, x_order)
from qmink.coeff import (CASE2_MINUS, CASE2_PLUS, GENERIC, ONE, Q, QB, REAL_Q,
                         T, UNIT_CIRCLE, integer, rat)
from qmink.intertwiners import CheckReport, operator_source
from qmink.rewrite import NCPoly
from qmink.tensor import compose, identity, U, B

ALL_REGIMES = (GENERIC, UNIT_CIRCLE, REAL_Q, CASE2_PLUS, CASE2_MINUS)


# ---------------------------------------------------------------------------
# relation systems
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("regime", ALL_REGIMES, ids=lambda r: r.label)
def test_derived_and_tabulated_spans_agree(regime):
    alg = minkowski_system(regime)     # raises SpanMismatchError on failure
    assert len(alg.relations) == 6
    assert len(alg.system.rules) == 6


def test_unit_circle_rules_match_the_displayed_table():
    sys = minkowski_system(UNIT_CIRCLE).system
    alph = sys.alphabet

    def rule(a, b):
        return sys.rules[(alph.index(a), alph.index(b))]

    tq = (T * Q) ** -1
    assert rule("beta", "alpha").equals(NCPoly.word(alph, ("alpha", "beta"), tq))
    assert rule("gamma", "alpha").equals(
        NCPoly.word(alph, ("alpha", "gamma"), T * Q ** -1))
    assert rule("delta", "beta").equals(NCPoly.word(alph, ("beta", "delta"), tq))
    assert rule("delta", "gamma").equals(
        NCPoly.word(alph, ("gamma", "delta"), T * Q ** -1))
    assert rule("gamma", "beta").equals(NCPoly.word(alph, ("beta", "gamma")))
    assert rule("delta", "alpha").equals(
        NCPoly.word(alph, ("alpha", "delta"))
        - NCPoly.word(alph, ("beta", "gamma"), (Q - Q ** -1) / T))


def test_real_q_table_swaps_roles():
    sys = minkowski_system(REAL_Q).system
    alph = sys.alphabet
    # delta alpha = alpha delta and [beta, gamma] = t(q - 1/q) alpha delta
    got = sys.normal_form(NCPoly.word(alph, ("delta", "alpha")))
    assert got.equals(NCPoly.word(alph, ("alpha", "delta")))
    comm = (NCPoly.word(alph, ("beta", "gamma"))
            - NCPoly.word(alph, ("gamma", "beta"))
            - NCPoly.word(alph, ("alpha", "delta"), T * (Q - Q ** -1)))
    assert sys.normal_form(comm).is_zero()


def test_case2_rules_carry_the_corner_terms():
    sys = minkowski_system(CASE2_PLUS).system
    alph = sys.alphabet
    # alpha beta -> beta alpha + eps beta delta after t = q
    rhs = sys.rules[(alph.index("alpha"), alph.index("beta"))]
    want = (NCPoly.word(alph, ("beta", "alpha"))
            + NCPoly.word(alph, ("beta", "delta")))
    assert rhs.equals(want)
    sysm = minkowski_system(CASE2_MINUS).system
    rhsm = sysm.rules[(alph.index("alpha"), alph.index("beta"))]
    wantm = (NCPoly.word(alph, ("beta", "alpha"))
             - NCPoly.word(alph, ("beta", "delta")))
    assert rhsm.equals(wantm)


def test_orderings_per_regime():
    assert x_order(UNIT_CIRCLE) == ("alpha", "beta", "gamma", "delta")
    assert x_order(REAL_Q) == ("beta", "alpha", "delta", "gamma")
    assert x_order(CASE2_PLUS) == ("beta", "alpha", "delta", "gamma")


# ---------------------------------------------------------------------------
# ordering obstruction: scripted oracle, frozen closed form, sampling
# ---------------------------------------------------------------------------

def _scripted_paths():
    """Independent reduction of both orderings with table coefficients.

    Path A reduces the trailing pair first, path B the leading pair; each
    step uses the displayed relation coefficients directly, not the
    rewrite engine.  Returns the coefficient gap at the two cubic words.
    """
    qb2p1 = QB ** 2 + ONE
    q2p1 = Q ** 2 + ONE
    modsq = Q * QB
    # path A: gamma (beta alpha): swap twice, then resolve gamma beta
    # q(qb^2+1) gamma beta alpha
    #   -> q qb t^-1 (qb^2+1) gamma alpha beta
    #   -> qb (qb^2+1) alpha gamma beta
    #   -> (qb/q) alpha [t(1 - |q|^4) alpha delta + qb(q^2+1) beta gamma]
    a_aad = (QB / Q) * T * (ONE - modsq ** 2)
    a_abg = (QB ** 2 / Q) * q2p1
    # path B: (gamma beta) alpha, then alpha delta alpha and beta gamma alpha
    b_aad = (ONE - modsq ** 2) * QB * q2p1 * T / (Q * qb2p1)
    b_abg = ((ONE - modsq ** 2) * (QB ** 2 - Q ** 2) / (Q * qb2p1)
             + (QB ** 2 / Q) * q2p1)
    return a_aad - b_aad, a_abg - b_abg


def test_obstruction_matches_the_scripted_oracle():
    aad, abg, _ = pbw_obstruction_generic()
    want_aad, want_abg = _scripted_paths()
    assert aad == want_aad
    assert abg == want_abg


def test_obstruction_closed_form():
    aad, abg, _ = pbw_obstruction_generic()
    common = (ONE - (Q * QB) ** 2) * (QB ** 2 - Q ** 2) / (QB ** 2 + ONE)
    assert aad == T * (QB / Q) * common
    assert abg == -(common / Q)


def test_obstruction_numeric_sampling():
    aad, abg, _ = pbw_obstruction_generic()
    rng = random.Random(20240817)
    for _ in range(20):
        q = cmath.exp(1j * rng.uniform(0.1, 3.0)) * rng.uniform(0.5, 2.0)
        qb = cmath.exp(1j * rng.uniform(0.1, 3.0)) * rng.uniform(0.5, 2.0)
        t = rng.uniform(0.5, 2.0)
        va = aad.eval(q, t, qbar=qb)
        closed = (t * (qb / q) * (1 - (q * qb) ** 2) * (qb ** 2 - q ** 2)
                  / (qb ** 2 + 1))
        assert abs(va - closed) < 1e-9 * max(1.0, abs(closed))
        vb = abg.eval(q, t, qbar=qb)
        closed_b = -((1 - (q * qb) ** 2) * (qb ** 2 - q ** 2)
                     / (q * (qb ** 2 + 1)))
        assert abs(vb - closed_b) < 1e-9 * max(1.0, abs(closed_b))


def test_obstruction_vanishing_locus():
    aad, abg, _ = pbw_obstruction_generic()
    for s in (aad, abg):
        assert not s.is_zero()
        assert s.specialize(UNIT_CIRCLE).is_zero()
        assert s.specialize(REAL_Q).is_zero()
        assert s.subst_qbar_minus_q().is_zero()
        assert s.numerator_divisible_by(ONE - (Q * QB) ** 2)
        assert s.numerator_divisible_by(QB ** 2 - Q ** 2)


def test_obstruction_supported_on_independent_words():
    _, _, diff = pbw_obstruction_generic()
    alph = minkowski_system(GENERIC).system.alphabet
    support = {tuple(alph.name(k) for k in w) for w in diff.terms}
    assert support == {("alpha", "alpha", "delta"), ("alpha", "beta", "gamma")}


# ---------------------------------------------------------------------------
# Minkowski length
# ---------------------------------------------------------------------------

def test_length_contraction_raw_form():
    # independent bookkeeping oracle for the contraction in the unit circle
    ell = minkowski_length_poly(UNIT_CIRCLE)
    alph = x_alphabet(UNIT_CIRCLE)
    want = (NCPoly.word(alph, ("gamma", "beta"))
            + NCPoly.word(alph, ("beta", "gamma"))
            - NCPoly.word(alph, ("delta", "alpha"), T * Q)
            - NCPoly.word(alph, ("alpha", "delta"), T * Q ** -1))
    assert ell.equals(want.scale(ONE))


def test_length_centrality_and_star():
    _, reports, comparison = minkowski_length(UNIT_CIRCLE)
    by_id = {r.check_id: r for r in reports}
    assert by_id["length/centrality"].status == "pass"
    assert by_id["length/star-fixed"].status == "pass"
    assert comparison == integer(-2)


def test_length_real_q_centrality():
    _, reports, comparison = minkowski_length(REAL_Q)
    assert all(r.status == "pass" for r in reports)
    assert comparison is None


def test_length_suite_and_mz():
    reports = suite_length(UNIT_CIRCLE)
    assert all(r.status == "pass" for r in reports)
    assert mz_presentation_check().status == "pass"
    skip = suite_length(GENERIC)
    assert skip[0].status == "skip"


# ---------------------------------------------------------------------------
# crossed product
# ---------------------------------------------------------------------------

def test_crossed_reduce_single_rule_matches_matrix_entries():
    cp = build_crossed(UNIT_CIRCLE, "first")
    tmat = operator_source(UNIT_CIRCLE).get("T:first")
    # x^{1 2bar} u^2_1 = beta u[2,1]: A=1, B=2, C=2, D=1
    got = crossed_reduce(cp, ("beta", "u[2,1]"))
    want = NCPoly.zero(cp.alphabet)
    row = (0 << 2) | (1 << 1) | 1     # (A-1, B-1, C-1)
    for col in range(8):
        v = tmat.entries[row][col]
        if v.is_zero():
            continue
        ee, kk, ll = (col >> 2) & 1, (col >> 1) & 1, col & 1
        want = want + NCPoly.word(
            cp.alphabet, (f"u[{ee + 1},1]", PAIR_NAMES[(kk << 1) | ll]), v)
    assert got.equals(want)


def test_crossed_reduce_sorts_mixed_words():
    cp = build_crossed(UNIT_CIRCLE, "first")
    out = crossed_reduce(cp, ("delta", "alpha", "u[1,1]"))
    idx_u = {cp.alphabet.index(f"u[{a},{b}]") for a in (1, 2) for b in (1, 2)}
    idx_ub = {cp.alphabet.index(f"ub[{a},{b}]") for a in (1, 2) for b in (1, 2)}
    for word in out.terms:
        kinds = ["u" if k in idx_u | idx_ub else "x" for k in word]
        assert kinds == sorted(kinds), "u-letters must all precede x-letters"
        xs = [k for k in word if k not in idx_u | idx_ub]
        assert cp.system.is_normal_word(tuple(xs))


def test_crossed_reduce_classical_commutation():
    from qmink.coeff import GaussianRational
    one = GaussianRational.of(1)
    cp = build_crossed(UNIT_CIRCLE, "first")
    from qmink.rewrite import RewriteRule, RewriteSystem
    cl_rules = [
        RewriteRule(lhs, NCPoly(cp.alphabet,
                                {w: c.subst_half(one, one, one)
                                 for w, c in rhs.terms.items()
                                 if not c.subst_half(one, one, one).is_zero()}))
        for lhs, rhs in cp.system.rules.items()]
    cl = RewriteSystem(cp.alphabet, cl_rules, UNIT_CIRCLE)
    got = cl.normal_form(NCPoly.word(cp.alphabet, ("alpha", "u[1,2]")))
    assert got.equals(NCPoly.word(cp.alphabet, ("u[1,2]", "alpha")))


def test_u_words_are_left_free():
    cp = build_crossed(UNIT_CIRCLE, "first")
    p = NCPoly.word(cp.alphabet, ("u[2,1]", "u[1,2]"))
    assert cp.system.normal_form(p).equals(p)


@pytest.mark.parametrize("variant", ["first", "second"])
def test_crossed_star_check(variant):
    assert crossed_star_check(UNIT_CIRCLE, variant).status == "pass"


# ---------------------------------------------------------------------------
# braided square
# ---------------------------------------------------------------------------

def test_braided_delta_passes_with_the_spectral_scalar():
    residuals, steps, sq = braided_delta_check(UNIT_CIRCLE)
    assert all(v.is_zero() for v in residuals.values())
    assert len(steps) == 5
    assert sq.sigma == (Q ** -1).specialize(UNIT_CIRCLE)


def test_braided_delta_fails_with_trivial_braiding():
    residuals, _, sq = braided_delta_check(UNIT_CIRCLE, sigma=ONE)
    nonzero = {k: v for k, v in residuals.items() if not v.is_zero()}
    assert nonzero
    # every leftover coefficient equals a matrix-obstruction entry
    obstruction = compose(sq.pminus, sq.what + identity((U, B, U, B)))
    for (m, n), poly in nonzero.items():
        row = (m << 2) | n
        for w, c in poly.terms.items():
            names = [sq.alphabet.name(k) for k in w]
            aa, cc = (int(x) for x in names[0][2:-1].split(","))
            bb = PAIR_NAMES.index(names[1])
            assert c == obstruction.entries[row][(aa << 2) | bb]


def test_braided_delta_classical_limit():
    residuals, _, _ = braided_delta_check(UNIT_CIRCLE, sigma=ONE, classical=True)
    assert all(v.is_zero() for v in residuals.values())


def test_braided_delta_requires_certified_prerequisites():
    bad = [CheckReport("probe", "unit-circle", "fail")]
    with pytest.raises(OracleUnverifiedError):
        braided_delta_check(UNIT_CIRCLE, prereq=bad)


def test_braided_square_is_unit_circle_only():
    with pytest.raises(SpanMismatchError):
        build_braided_square(REAL_Q)


def test_delta_suite():
    reports = suite_delta(UNIT_CIRCLE)
    assert all(r.status == "pass" for r in reports)
    assert {r.check_id for r in reports} == {
        "delta/braided-coproduct", "delta/sigma-one-fails",
        "delta/classical-sigma-one", "delta/braiding-consistency"}
    assert suite_delta(GENERIC)[0].status == "skip"


# ---------------------------------------------------------------------------
# combined normal-form system and classical degeneration
# ---------------------------------------------------------------------------

def test_full_system_unit_circle_shape():
    alph, system = full_system(UNIT_CIRCLE)
    p = NCPoly.word(alph, ("alpha", "h[1,2]", "alpha'"))
    out = system.normal_form(p)
    assert not out.is_zero()
    h_idx = {alph.index(f"h[{r},{c}]") for r in range(4) for c in range(4)}
    for word in out.terms:
        kinds = [0 if k in h_idx else (2 if alph.name(k).endswith("'") else 1)
                 for k in word]
        assert kinds == sorted(kinds)


def test_full_system_generic_has_no_h_symbols():
    alph, _ = full_system(GENERIC)
    with pytest.raises(Exception):
        alph.index("h[0,0]")


def test_suite_pbw_all_regimes():
    for regime in ALL_REGIMES:
        assert all(r.status == "pass" for r in suite_pbw(regime)), regime.label


def test_suite_classical():
    reports = suite_classical(GENERIC)
    assert all(r.status == "pass" for r in reports)
    assert {r.check_id for r in reports} == {
        "classical/operators", "classical/minkowski-commutative",
        "classical/crossed-commutative", "classical/braided-commutative",
        "classical/corner-term-survives"}
