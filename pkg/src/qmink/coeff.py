"""Exact scalar arithmetic over Q(i)(q^(1/2), qb^(1/2), t^(1/2)).

Every coefficient in the engine lives in the field of rational functions
in three formal atoms -- the half powers of q, qb and t -- with Gaussian
rational coefficients.  qb is an independent variable in the generic
regime; the other regimes substitute it away (qb := 1/q on the unit
circle, qb := q for real q, and qb := q, t := q in the epsilon = +-1
case).

Fractions are never reduced to a canonical gcd form: equality is decided
by cross multiplication, and construction only strips a common monomial
factor and makes the denominator monic.  That keeps representations small
without a multivariate gcd engine, and zero testing stays exact because
the numerator of a zero value is the zero polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "DomainError", "MissingParameterError",
    "GaussianRational", "LaurentPoly", "Scalar",
    "Regime", "RegimeKind",
    "GENERIC", "UNIT_CIRCLE", "REAL_Q", "CASE2_PLUS", "CASE2_MINUS",
    "ALL_REGIMES", "regime_from_label",
    "ZERO", "ONE", "I", "Q", "QB", "T", "Q_HALF", "QB_HALF", "T_HALF",
    "integer", "rat", "gauss", "exact_divide",
]


class DomainError(ValueError):
    """Numeric evaluation requested at an excluded parameter value."""


class MissingParameterError(ValueError):
    """A regime or builder was invoked without a parameter it needs."""


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational re + im*i."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re=0, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def power(self, k: int) -> "GaussianRational":
        base = self if k >= 0 else self.inverse()
        out = GR_ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if not self.im:
            return str(self.re)
        if self.im == 1:
            ims = "i"
        elif self.im == -1:
            ims = "-i"
        else:
            ims = f"{self.im}*i"
        if not self.re:
            return ims
        sign = "+" if self.im > 0 else "-"
        mag = ims.lstrip("-")
        return f"{self.re} {sign} {mag}"


GR_ZERO = GaussianRational.of(0)
GR_ONE = GaussianRational.of(1)
GR_I = GaussianRational.of(0, 1)


# --------------------------------------------------------------------------
# Laurent polynomials in the three half-power atoms
# --------------------------------------------------------------------------

Mono = tuple[int, int, int]  # exponents of q^(1/2), qb^(1/2), t^(1/2)

_MONO_ONE: Mono = (0, 0, 0)
_ATOM_NAMES = ("q", "qb", "t")
_POLY_ONE = None  # set below, after LaurentPoly is defined


def _deglex_key(m: Mono):
    return (m[0] + m[1] + m[2], m)


class LaurentPoly:
    """Sparse Laurent polynomial: finite map monomial -> GaussianRational."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Mono, GaussianRational]):
        self.terms = terms

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly({})

    @staticmethod
    def const(c: GaussianRational) -> "LaurentPoly":
        return LaurentPoly({_MONO_ONE: c} if not c.is_zero else {})

    @staticmethod
    def monomial(m: Mono, c: GaussianRational = GR_ONE) -> "LaurentPoly":
        return LaurentPoly({m: c} if not c.is_zero else {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    __hash__ = None  # representation is not canonical enough for hashing

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s.is_zero:
                    del out[m]
                else:
                    out[m] = s
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Mono, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    if not c.is_zero:
                        out[m] = c
                else:
                    s = s + c
                    if s.is_zero:
                        del out[m]
                    else:
                        out[m] = s
        return LaurentPoly(out)

    def scale(self, c: GaussianRational) -> "LaurentPoly":
        if c.is_zero:
            return LaurentPoly({})
        return LaurentPoly({m: v * c for m, v in self.terms.items()})

    def map_monos(self, fn) -> "LaurentPoly":
        """Apply a monomial substitution; colliding images are merged."""
        out: dict[Mono, GaussianRational] = {}
        for m, c in self.terms.items():
            m2, c2 = fn(m, c)
            s = out.get(m2)
            if s is None:
                if not c2.is_zero:
                    out[m2] = c2
            else:
                s = s + c2
                if s.is_zero:
                    del out[m2]
                else:
                    out[m2] = s
        return LaurentPoly(out)

    def min_exps(self) -> Mono:
        it = iter(self.terms)
        first = next(it)
        a, b, c = first
        for m in it:
            a = min(a, m[0]); b = min(b, m[1]); c = min(c, m[2])
        return (a, b, c)

    def shifted(self, delta: Mono) -> "LaurentPoly":
        da, db, dc = delta
        return LaurentPoly({(m[0] + da, m[1] + db, m[2] + dc): v
                            for m, v in self.terms.items()})

    def leading(self) -> tuple[Mono, GaussianRational]:
        m = max(self.terms, key=_deglex_key)
        return m, self.terms[m]

    def eval(self, qh: complex, qbh: complex, th: complex) -> complex:
        out = 0j
        for (a, b, c), v in self.terms.items():
            out += v.to_complex() * qh ** a * qbh ** b * th ** c
        return out

    def subst_half(self, qh: GaussianRational | None,
                   qbh: GaussianRational | None,
                   th: GaussianRational | None) -> "LaurentPoly":
        """Exactly substitute values for some of the half-power atoms."""
        vals = (qh, qbh, th)

        def fn(m, c):
            m2 = list(m)
            for k, v in enumerate(vals):
                if v is not None:
                    c = c * v.power(m[k])
                    m2[k] = 0
            return tuple(m2), c

        return self.map_monos(fn)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_deglex_key, reverse=True):
            c = self.terms[m]
            ms = _mono_str(m)
            parts.append(_coeff_mono_str(c, ms, first=not parts))
        return "".join(parts)


def _mono_str(m: Mono) -> str:
    bits = []
    for name, e in zip(_ATOM_NAMES, m):
        if e == 0:
            continue
        if e % 2 == 0:
            k = e // 2
            bits.append(name if k == 1 else f"{name}^{k}")
        else:
            bits.append(f"{name}^({e}/2)")
    return "*".join(bits)


def _coeff_mono_str(c: GaussianRational, ms: str, first: bool) -> str:
    neg = (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)
    mag = -c if neg else c
    if ms:
        if mag.re == 1 and mag.im == 0:
            body = ms
        else:
            cs = str(mag)
            if " " in cs:
                cs = f"({cs})"
            body = f"{cs}*{ms}"
    else:
        body = str(mag) if " " not in str(mag) else f"({mag})"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


_POLY_ONE = LaurentPoly({_MONO_ONE: GR_ONE})


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly | None:
    """Return p/d when d divides p exactly, else None.

    Works up to monomial units: both arguments are shifted to honest
    polynomials first, so divisibility is decided in the Laurent ring.
    """
    if d.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero:
        return LaurentPoly.zero()
    mp = p.min_exps()
    md = d.min_exps()
    p2 = p.shifted(tuple(-e for e in mp))
    d2 = d.shifted(tuple(-e for e in md))
    lead_m, lead_c = d2.leading()
    lead_inv = lead_c.inverse()
    rem = p2
    quot: dict[Mono, GaussianRational] = {}
    while not rem.is_zero:
        m, c = rem.leading()
        s = (m[0] - lead_m[0], m[1] - lead_m[1], m[2] - lead_m[2])
        if any(e < 0 for e in s):
            return None
        f = c * lead_inv
        quot[s] = f
        rem = rem - d2.shifted(s).scale(f)
    # restore the monomial factor stripped from p and d
    delta = (mp[0] - md[0], mp[1] - md[1], mp[2] - md[2])
    out = LaurentPoly(quot)
    return out.shifted(delta) if delta != _MONO_ONE else out


# --------------------------------------------------------------------------
# Regimes
# --------------------------------------------------------------------------

class RegimeKind(Enum):
    GENERIC = "generic"
    UNIT_CIRCLE = "unit-circle"
    REAL_Q = "real-q"
    CASE2 = "case2"


@dataclass(frozen=True)
class Regime:
    """Specialization of the formal parameters.

    generic keeps q, qb, t independent; unit-circle substitutes
    qb^(1/2) := q^(-1/2); real-q substitutes qb^(1/2) := q^(1/2); case2
    additionally identifies t with q and carries epsilon = +-1.
    """

    kind: RegimeKind
    epsilon: int = 0

    def __post_init__(self):
        if self.kind is RegimeKind.CASE2:
            if self.epsilon not in (1, -1):
                raise MissingParameterError("case2 regime needs epsilon = +1 or -1")
        elif self.epsilon != 0:
            raise MissingParameterError(f"{self.kind.value} regime takes no epsilon")

    @property
    def label(self) -> str:
        if self.kind is RegimeKind.CASE2:
            return "case2+" if self.epsilon == 1 else "case2-"
        return self.kind.value

    def subst_mono(self, m: Mono) -> Mono:
        a, b, c = m
        k = self.kind
        if k is RegimeKind.GENERIC:
            return m
        if k is RegimeKind.UNIT_CIRCLE:
            return (a - b, 0, c)
        if k is RegimeKind.REAL_Q:
            return (a + b, 0, c)
        return (a + b + c, 0, 0)  # CASE2: qb := q, t := q


GENERIC = Regime(RegimeKind.GENERIC)
UNIT_CIRCLE = Regime(RegimeKind.UNIT_CIRCLE)
REAL_Q = Regime(RegimeKind.REAL_Q)
CASE2_PLUS = Regime(RegimeKind.CASE2, 1)
CASE2_MINUS = Regime(RegimeKind.CASE2, -1)
ALL_REGIMES = (GENERIC, UNIT_CIRCLE, REAL_Q, CASE2_PLUS, CASE2_MINUS)

_LABELS = {r.label: r for r in ALL_REGIMES}


def regime_from_label(label: str) -> Regime:
    try:
        return _LABELS[label]
    except KeyError:
        raise MissingParameterError(
            f"unknown regime {label!r}; expected one of {sorted(_LABELS)}") from None


# --------------------------------------------------------------------------
# Scalars: fractions of Laurent polynomials
# --------------------------------------------------------------------------

class Scalar:
    """Element of the rational-function field, stored as num/den."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num = LaurentPoly.zero()
            self.den = LaurentPoly.const(GR_ONE)
            return
        # cheap cancellation: not a gcd, just an exact-division attempt,
        # which catches the common case of a denominator factor surviving
        # verbatim inside the numerator
        if len(den.terms) > 1:
            quot = exact_divide(num, den)
            if quot is not None:
                num = quot
                den = LaurentPoly.const(GR_ONE)
        # strip the common monomial factor of the pair
        na, nb, nc = num.min_exps()
        da, db, dc = den.min_exps()
        shift = (-min(na, da), -min(nb, db), -min(nc, dc))
        if shift != _MONO_ONE:
            num = num.shifted(shift)
            den = den.shifted(shift)
        # make the denominator monic
        _, lc = den.leading()
        if not (lc.re == 1 and lc.im == 0):
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_poly(p: LaurentPoly) -> "Scalar":
        return Scalar(p, LaurentPoly.const(GR_ONE))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_one(self) -> bool:
        return self.num == self.den

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den) == (other.num * self.den)

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        if self.num.is_zero:
            return other
        if other.num.is_zero:
            return self
        if self.den is other.den or self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        # when one denominator divides the other, keep the larger one
        quot = exact_divide(self.den, other.den)
        if quot is not None:
            return Scalar(self.num + other.num * quot, self.den)
        quot = exact_divide(other.den, self.den)
        if quot is not None:
            return Scalar(self.num * quot + other.num, other.den)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __neg__(self) -> "Scalar":
        out = object.__new__(Scalar)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other: "Scalar") -> "Scalar":
        if self.num.is_zero or other.num.is_zero:
            return ZERO
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        # cross-cancel before multiplying to slow denominator growth
        if len(d2.terms) > 1:
            quot = exact_divide(n1, d2)
            if quot is not None:
                n1, d2 = quot, _POLY_ONE
        if len(d1.terms) > 1:
            quot = exact_divide(n2, d1)
            if quot is not None:
                n2, d1 = quot, _POLY_ONE
        return Scalar(n1 * n2, d1 * d2)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(self.num * other.den, self.den * other.num)

    def inverse(self) -> "Scalar":
        if self.num.is_zero:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.den, self.num)

    def __pow__(self, k: int) -> "Scalar":
        if k == 0:
            return ONE
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- structure maps ----------------------------------------------------

    def star(self, regime: Regime = GENERIC) -> "Scalar":
        """Conjugation: q <-> qb, i -> -i, t fixed; then specialize."""

        def fn(m, c):
            return (m[1], m[0], m[2]), c.conj()

        out = object.__new__(Scalar)
        out.num = self.num.map_monos(fn)
        out.den = self.den.map_monos(fn)
        if regime.kind is RegimeKind.GENERIC:
            return Scalar(out.num, out.den)
        return out.specialize(regime)

    def specialize(self, regime: Regime) -> "Scalar":
        if regime.kind is RegimeKind.GENERIC:
            return self

        def fn(m, c):
            return regime.subst_mono(m), c

        return Scalar(self.num.map_monos(fn), self.den.map_monos(fn))

    def flip_half(self, atom: int) -> "Scalar":
        """Field automorphism sending one half-power atom to its negative."""

        def fn(m, c):
            return m, (-c if m[atom] % 2 else c)

        return Scalar(self.num.map_monos(fn), self.den.map_monos(fn))

    def subst_qbar_minus_q(self) -> "Scalar":
        """Variable substitution qb := -q (via qb^(1/2) := i*q^(1/2))."""

        def fn(m, c):
            return (m[0] + m[1], 0, m[2]), c * GR_I.power(m[1])

        return Scalar(self.num.map_monos(fn), self.den.map_monos(fn))

    def subst_half(self, qh: GaussianRational | None = None,
                   qbh: GaussianRational | None = None,
                   th: GaussianRational | None = None) -> "Scalar":
        return Scalar(self.num.subst_half(qh, qbh, th),
                      self.den.subst_half(qh, qbh, th))

    # -- numerics ----------------------------------------------------------

    def eval(self, q: complex, t: float, regime: Regime = GENERIC,
             qbar: complex | None = None) -> complex:
        """Double precision value at a sample point.

        One fixed branch per evaluation: the principal square roots of q,
        qbar and t give the three atoms.  qbar defaults to conj(q).
        """
        q = complex(q)
        for bad in (0, 1j, -1j):
            if abs(q - bad) < 1e-12:
                raise DomainError(f"q = {bad} is excluded")
        if regime.kind is RegimeKind.UNIT_CIRCLE and abs(abs(q) - 1) > 1e-12:
            raise DomainError("unit-circle regime needs |q| = 1")
        if regime.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
            if abs(q.imag) > 1e-12 or q.real <= 0:
                raise DomainError("real-q/case2 regimes need real positive q")
        if t <= 0:
            raise DomainError("t must be a positive real")
        qb = q.conjugate() if qbar is None else complex(qbar)
        qh = cmath.sqrt(q)
        qbh = cmath.sqrt(qb)
        th = math.sqrt(t)
        dv = self.den.eval(qh, qbh, th)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return self.num.eval(qh, qbh, th) / dv

    # -- divisibility ------------------------------------------------------

    def numerator_divisible_by(self, factor: "Scalar") -> bool:
        """True when factor's numerator divides this numerator exactly."""
        return exact_divide(self.num, factor.num) is not None

    # -- display -----------------------------------------------------------

    def __str__(self) -> str:
        ns = str(self.num)
        if self.den == LaurentPoly.const(GR_ONE):
            return ns
        ds = str(self.den)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        if len(self.den.terms) > 1 or "*" in ds or "^" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


# --------------------------------------------------------------------------
# Constants and factories
# --------------------------------------------------------------------------

ZERO = Scalar.from_poly(LaurentPoly.zero())
ONE = Scalar.from_poly(LaurentPoly.const(GR_ONE))
I = Scalar.from_poly(LaurentPoly.const(GR_I))
Q_HALF = Scalar.from_poly(LaurentPoly.monomial((1, 0, 0)))
QB_HALF = Scalar.from_poly(LaurentPoly.monomial((0, 1, 0)))
T_HALF = Scalar.from_poly(LaurentPoly.monomial((0, 0, 1)))
Q = Scalar.from_poly(LaurentPoly.monomial((2, 0, 0)))
QB = Scalar.from_poly(LaurentPoly.monomial((0, 2, 0)))
T = Scalar.from_poly(LaurentPoly.monomial((0, 0, 2)))


def integer(n: int) -> Scalar:
    return Scalar.from_poly(LaurentPoly.const(GaussianRational.of(n)))


def rat(n: int, d: int = 1) -> Scalar:
    return Scalar.from_poly(LaurentPoly.const(GaussianRational.of(Fraction(n, d))))


def gauss(re, im) -> Scalar:
    return Scalar.from_poly(LaurentPoly.const(GaussianRational.of(re, im)))
