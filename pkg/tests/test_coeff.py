import cmath

import pytest
from hypothesis import assume, given, settings, strategies as st

from qmink.coeff import (CASE2_PLUS, GENERIC, REAL_Q, UNIT_CIRCLE, DomainError,
                         GaussianRational, LaurentPoly, MissingParameterError,
                         ONE, Q, QB, Q_HALF, QB_HALF, Regime, RegimeKind,
                         Scalar, T, T_HALF, ZERO, exact_divide, gauss, integer,
                         rat, regime_from_label, I)

# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

monos = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
coeffs = st.builds(GaussianRational.of, st.integers(-3, 3), st.integers(-3, 3))


def _poly(d):
    return LaurentPoly({m: c for m, c in d.items() if not c.is_zero})


polys = st.dictionaries(monos, coeffs, max_size=3).map(_poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero)
scalars = st.builds(Scalar, polys, nonzero_polys)
nonzero_scalars = st.builds(Scalar, nonzero_polys, nonzero_polys)
regimes = st.sampled_from([GENERIC, UNIT_CIRCLE, REAL_Q, CASE2_PLUS])


# ---------------------------------------------------------------------------
# fixed values
# ---------------------------------------------------------------------------

def test_specialize_unit_circle_modulus():
    assert (Q * QB).specialize(UNIT_CIRCLE) == ONE


def test_specialize_real_q_collapses_conjugate():
    assert (QB ** 2 - Q ** 2).specialize(REAL_Q).is_zero()


def test_specialize_generic_is_identity():
    s = QB ** 2 - Q ** 2
    assert s.specialize(GENERIC) == s
    assert not s.is_zero()


def test_case2_identifies_t_with_q():
    assert (T - Q).specialize(CASE2_PLUS).is_zero()
    assert (QB - Q).specialize(CASE2_PLUS).is_zero()


def test_star_basics():
    assert Q.star() == QB
    assert (I * T_HALF).star() == -(I * T_HALF)
    s = (Q + QB) / T
    assert s.star().star() == s


def test_star_in_unit_circle_inverts_q():
    assert Q.star(UNIT_CIRCLE) == Q.specialize(UNIT_CIRCLE) ** -1
    assert Q.star(REAL_Q) == Q


def test_is_zero_examples():
    assert (Q * Q ** -1 - ONE).is_zero()
    assert not (QB ** 2 - Q ** 2).is_zero()
    assert (ONE - (Q * QB) ** 2).specialize(UNIT_CIRCLE).is_zero()


def test_eval_simple():
    assert abs((Q + Q ** -1).eval(1 + 0j, 1.0) - 2) < 1e-15


def test_eval_unit_circle_conjugate():
    q = cmath.exp(1j * cmath.pi / 5)
    got = QB.specialize(UNIT_CIRCLE).eval(q, 1.0, UNIT_CIRCLE)
    assert abs(got - q.conjugate()) < 1e-12


def test_eval_fraction_matches_two_path_evaluation():
    # oracle: substitute numbers into numerator and denominator separately
    # before forming the quotient
    q = cmath.exp(1j * cmath.pi / 5)
    s = ((QB ** 2 - Q ** 2) / (QB ** 2 + ONE)).specialize(UNIT_CIRCLE)
    direct = s.eval(q, 1.0, UNIT_CIRCLE)
    qb = 1 / q
    expected = (qb ** 2 - q ** 2) / (qb ** 2 + 1)
    assert abs(direct - expected) < 1e-12


def test_eval_domain_errors():
    with pytest.raises(DomainError):
        Q.eval(0j, 1.0)
    with pytest.raises(DomainError):
        Q.eval(1j, 1.0)
    with pytest.raises(DomainError):
        Q.eval(2 + 0j, 1.0, UNIT_CIRCLE)
    with pytest.raises(DomainError):
        Q.eval(1 + 0j, -1.0)
    with pytest.raises(ZeroDivisionError):
        (ONE / (Q - ONE)).eval(1 + 0j, 1.0)


def test_division_by_zero_scalar():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_regime_labels_round_trip():
    for label in ("generic", "unit-circle", "real-q", "case2+", "case2-"):
        assert regime_from_label(label).label == label
    with pytest.raises(MissingParameterError):
        regime_from_label("nope")
    with pytest.raises(MissingParameterError):
        Regime(RegimeKind.CASE2)


def test_exact_divide():
    p = (Q ** 2 - ONE) * (Q ** 2 + ONE)
    quot = exact_divide(p.num, (Q ** 2 - ONE).num)
    assert quot is not None
    assert Scalar.from_poly(quot) == Q ** 2 + ONE
    assert exact_divide((Q + ONE).num, (Q + T).num) is None


def test_divisibility_up_to_monomials():
    s = (Q ** 2 - ONE) * T * Q ** -3
    assert s.numerator_divisible_by(Q ** 2 - ONE)
    assert not (Q ** 2 + T).numerator_divisible_by(Q ** 2 - ONE)


def test_subst_qbar_minus_q():
    assert (QB + Q).subst_qbar_minus_q().is_zero()
    assert (QB * Q).subst_qbar_minus_q() == -(Q ** 2)


def test_printing_round_trip_shapes():
    assert str(ONE) == "1"
    assert str(Q) == "q"
    assert str(Q_HALF) == "q^(1/2)"
    assert str(Q ** -1) == "1/q"
    assert str((Q ** 2 - ONE) / (Q * T)) == "(q^2 - 1)/(q*t)"
    assert str(gauss(0, 1)) == "i"
    assert str(rat(3, 2)) == "3/2"


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a


@settings(max_examples=40, deadline=None)
@given(scalars)
def test_field_inverses(a):
    assume(not a.is_zero())
    assert a * a.inverse() == ONE
    assert a - a == ZERO


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, regimes)
def test_star_is_involutive_and_multiplicative(a, b, r):
    try:
        a = a.specialize(r)
        b = b.specialize(r)
    except ZeroDivisionError:
        assume(False)  # denominator vanishes under this substitution
    assert a.star(r).star(r) == a
    assert (a * b).star(r) == a.star(r) * b.star(r)
    assert (a + b).star(r) == a.star(r) + b.star(r)


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, scalars, regimes)
def test_specialize_is_a_ring_homomorphism(a, b, c, r):
    try:
        lhs = (a * b + c).specialize(r)
        rhs = a.specialize(r) * b.specialize(r) + c.specialize(r)
    except ZeroDivisionError:
        assume(False)  # denominator vanishes under this substitution
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, st.integers(1, 6), st.sampled_from([0.5, 2.0]))
def test_eval_is_multiplicative(a, b, k, t):
    q = cmath.exp(1j * k * 0.37)
    try:
        va, vb, vab = a.eval(q, t), b.eval(q, t), (a * b).eval(q, t)
    except ZeroDivisionError:
        assume(False)
    scale = max(1.0, abs(va) * abs(vb))
    assert abs(vab - va * vb) / scale < 1e-9


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, st.sampled_from([0, 1, 2]))
def test_half_power_flip_is_an_automorphism(a, b, atom):
    assert (a * b).flip_half(atom) == a.flip_half(atom) * b.flip_half(atom)
    assert (a + b).flip_half(atom) == a.flip_half(atom) + b.flip_half(atom)
    assert a.flip_half(atom).flip_half(atom) == a


@settings(max_examples=40, deadline=None)
@given(polys, nonzero_polys)
def test_exact_divide_reverses_multiplication(p, d):
    quot = exact_divide(p * d, d)
    assert quot is not None
    assert quot == p
