"""Construction of the named structure maps and the identity suites.

Everything is built once over the generic scalar field and specialized to
the requested regime, so a single code path serves all regimes.  The
canonical crossing map X is the rescaled form (epsilon = 0 in case 1,
epsilon = +-1 with t = q in case 2); every identity checked here has the
same number of X factors on both sides, so the rescaling scalar cancels.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import coeff
from .coeff import (GENERIC, ONE, Q, Q_HALF, QB, QB_HALF, Regime, RegimeKind,
                    Scalar, T, T_HALF, ZERO, GaussianRational, integer,
                    MissingParameterError)
from .tensor import (B, Leg, TMap, U, compose, identity, invert,
                     permutation, place, span_equal, tau_conjugate,
                     tensor_product)

__all__ = [
    "CheckReport", "NamedOperator", "UnknownNameError", "build",
    "Factor", "MatrixIdentity", "run_matrix_identity", "identity_catalog",
    "suite_moves", "suite_braid", "suite_spectral", "suite_compat",
    "suite_crossed", "vector_components", "pauli_basis", "pauli_basis_inverse",
    "numeric_suite", "classical_limit", "OperatorSource",
]


class UnknownNameError(KeyError):
    """Requested operator name is not in the table."""


GR_ONE = GaussianRational.of(1)


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------

@dataclass
class CheckReport:
    """Structured pass/fail record for one check."""

    check_id: str
    regime: str
    status: str                      # pass | fail | skip
    mode: str = "expect-zero"        # expect-zero | expect-nonzero | info
    residual: str | None = None
    elapsed_ms: float = 0.0
    detail: str | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "regime": self.regime,
            "status": self.status,
            "mode": self.mode,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.residual is not None:
            out["residual"] = self.residual
        if self.detail is not None:
            out["detail"] = self.detail
        return out


def _residual_str(m: TMap) -> str | None:
    hit = m.first_nonzero()
    if hit is None:
        return None
    i, j, v = hit
    s = str(v)
    if len(s) > 160:
        s = s[:157] + "..."
    return f"entry[{i}][{j}] = {s}"


def _timed(check_id: str, regime: Regime, mode: str, fn) -> CheckReport:
    t0 = time.perf_counter()
    ok, residual, detail = fn()
    ms = (time.perf_counter() - t0) * 1e3
    return CheckReport(check_id, regime.label, "pass" if ok else "fail",
                       mode, residual, ms, detail)


# --------------------------------------------------------------------------
# Named operators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NamedOperator:
    name: str
    regime: Regime
    value: TMap


def _e_vector() -> TMap:
    m = TMap.zero((), (U, U))
    m.entries[1][0] = ONE
    m.entries[2][0] = -Q
    return m


def _e_functional() -> TMap:
    m = TMap.zero((U, U), ())
    m.entries[0][1] = -(Q ** -1)
    m.entries[0][2] = ONE
    return m


def _x(eps: int, perturbed: bool = False) -> TMap:
    m = TMap.zero((U, B), (B, U))
    m.entries[0][0] = ONE
    m.entries[3][3] = ONE
    m.entries[2][1] = T ** -1
    m.entries[1][2] = T ** -1
    if eps:
        m.entries[0][3] = integer(eps)
    if perturbed:
        # negative control: t^-1 -> t in one slot is a diagonal gauge
        # symmetry of the slide moves, so a corner term is added too;
        # between them every regime's moves break
        m.entries[2][1] = T
        m.entries[0][3] = m.entries[0][3] + T if eps else T
    return m


def _x_inverse(eps: int) -> TMap:
    m = TMap.zero((B, U), (U, B))
    m.entries[0][0] = ONE
    m.entries[3][3] = ONE
    m.entries[1][2] = T
    m.entries[2][1] = T
    if eps:
        m.entries[0][3] = integer(-eps)
    return m


def _conjugate_by_x(middle: TMap, x: TMap, xinv: TMap) -> TMap:
    amb_in = (U, B, U, B)
    amb_mid = (U, U, B, B)
    return compose(place(x, (2, 3), amb_mid),
                   compose(middle, place(xinv, (2, 3), amb_in)))


class OperatorSource:
    """Resolves operator names to specialized TMaps, with a cache.

    flip_atoms applies the half-power sign automorphism to every entry,
    which is how branch insensitivity of the suites is exercised.
    """

    def __init__(self, regime: Regime, flip_atoms: tuple[int, ...] = ()):
        self.regime = regime
        self.flip_atoms = tuple(flip_atoms)
        self._cache: dict[str, TMap] = {}

    def get(self, name: str) -> TMap:
        m = self._cache.get(name)
        if m is None:
            m = self._build(name)
            self._cache[name] = m
        return m

    # generic constructions, specialized at the end
    def _build(self, name: str) -> TMap:
        reg = self.regime
        eps = reg.epsilon

        def done(m: TMap) -> TMap:
            m = m.specialize(reg)
            for a in self.flip_atoms:
                m = m.map_entries(lambda s: s.flip_half(a))
            return m

        if name == "E":
            return done(_e_vector())
        if name == "E'":
            return done(_e_functional())
        if name == "X":
            return done(_x(eps))
        if name == "X^-1":
            return done(_x_inverse(eps))
        if name == "Xfull":
            # unrescaled normalization: sqrt(t) times the canonical form
            return done(_x(eps).scale(T_HALF))
        if name == "Xfull^-1":
            return done(_x_inverse(eps).scale(T_HALF ** -1))
        if name == "X!pert":
            return done(_x(eps, perturbed=True))
        if name == "X!pert^-1":
            return invert(self.get("X!pert"))
        if name == "P":
            ee = compose(_e_vector(), _e_functional())
            return done(ee.scale(-((Q + Q ** -1) ** -1)))
        if name == "P'":
            return identity((U, U)).specialize(reg) - self.get("P")
        if name == "Q":
            return done(tau_conjugate(
                compose(_e_vector(), _e_functional())
                .scale(-((Q + Q ** -1) ** -1))))
        if name == "Q'":
            return identity((B, B)).specialize(reg) - self.get("Q")
        if name == "M":
            p = compose(_e_vector(), _e_functional()).scale(-((Q + Q ** -1) ** -1))
            pp = identity((U, U)) - p
            return done(pp.scale(Q) - p.scale(Q ** -1))
        if name == "M^-1":
            p = compose(_e_vector(), _e_functional()).scale(-((Q + Q ** -1) ** -1))
            pp = identity((U, U)) - p
            return done(pp.scale(Q ** -1) - p.scale(Q))
        if name == "K":
            q = tau_conjugate(compose(_e_vector(), _e_functional())
                              .scale(-((Q + Q ** -1) ** -1)))
            qp = identity((B, B)) - q
            return done(qp.scale(QB) - q.scale(QB ** -1))
        if name == "K^-1":
            q = tau_conjugate(compose(_e_vector(), _e_functional())
                              .scale(-((Q + Q ** -1) ** -1)))
            qp = identity((B, B)) - q
            return done(qp.scale(QB ** -1) - q.scale(QB))
        if name in ("Rhat+", "Rhat-", "Rhat+^-1", "Rhat-^-1"):
            pick = {"Rhat+": ("M", "K"), "Rhat-": ("M", "K^-1"),
                    "Rhat+^-1": ("M^-1", "K^-1"), "Rhat-^-1": ("M^-1", "K")}
            a, b = pick[name]
            mid = tensor_product(self.get(a), self.get(b))
            return _conjugate_by_x(mid, self.get("X"), self.get("X^-1"))
        if name in ("Rhat+!pert", "Rhat-!pert"):
            a, b = ("M", "K") if name.startswith("Rhat+") else ("M", "K^-1")
            mid = tensor_product(self.get(a), self.get(b))
            return _conjugate_by_x(mid, self.get("X!pert"), self.get("X!pert^-1"))
        if name == "Pminus":
            mid = tensor_product(self.get("P'"), self.get("Q")) + \
                tensor_product(self.get("P"), self.get("Q'"))
            return _conjugate_by_x(mid, self.get("X"), self.get("X^-1"))
        if name == "Pi9":
            mid = tensor_product(self.get("P'"), self.get("Q'"))
            return _conjugate_by_x(mid, self.get("X"), self.get("X^-1"))
        if name == "Pi1":
            mid = tensor_product(self.get("P"), self.get("Q"))
            return _conjugate_by_x(mid, self.get("X"), self.get("X^-1"))
        if name in ("Ryb+", "Ryb-"):
            tau_bold = permutation((U, B, U, B), (3, 4, 1, 2))
            return compose(tau_bold, self.get("Rhat" + name[3]))
        if name == "S:first":
            return done(_m_generic().scale(Q_HALF ** -1))
        if name == "S:second":
            return done(_m_inv_generic().scale(Q_HALF))
        if name == "S^-1:first":
            return done(_m_inv_generic().scale(Q_HALF))
        if name == "S^-1:second":
            return done(_m_generic().scale(Q_HALF ** -1))
        if name.startswith("tauSbarInvTau:"):
            variant = name.split(":")[1]
            inv = _m_inv_generic().scale(Q_HALF) if variant == "first" \
                else _m_generic().scale(Q_HALF ** -1)
            return done(tau_conjugate(inv))
        if name.startswith("T:") or name.startswith("Tfull:"):
            stem, variant = name.split(":")
            s = self.get("S:" + variant)
            amb = (U, U, B)
            x = self.get("X" if stem == "T" else "Xfull")
            return compose(place(x, (2, 3), amb), place(s, (1, 2), amb))
        if name.startswith("T':"):
            variant = name.split(":")[1]
            ts = self.get("tauSbarInvTau:" + variant)
            amb = (B, U, B)
            step1 = place(self.get("X^-1"), (1, 2), amb)
            return compose(place(ts, (2, 3), step1.out_sig), step1)
        if name == "What":
            if reg.kind is RegimeKind.UNIT_CIRCLE:
                return self.get("Rhat-").scale((Q ** -1).specialize(reg))
            if reg.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
                return self.get("Rhat-")
            raise MissingParameterError(
                "the translation commutation matrix needs |q|=1 or real q")
        if name == "PauliBasis":
            return pauli_basis()
        if name == "PauliBasis^-1":
            return pauli_basis_inverse()
        raise UnknownNameError(name)


def _m_generic() -> TMap:
    p = compose(_e_vector(), _e_functional()).scale(-((Q + Q ** -1) ** -1))
    return (identity((U, U)) - p).scale(Q) - p.scale(Q ** -1)


def _m_inv_generic() -> TMap:
    p = compose(_e_vector(), _e_functional()).scale(-((Q + Q ** -1) ** -1))
    return (identity((U, U)) - p).scale(Q ** -1) - p.scale(Q)


_SOURCES: dict[tuple, OperatorSource] = {}


def operator_source(regime: Regime, flip_atoms: tuple[int, ...] = ()) -> OperatorSource:
    key = (regime, flip_atoms)
    src = _SOURCES.get(key)
    if src is None:
        src = OperatorSource(regime, flip_atoms)
        _SOURCES[key] = src
    return src


def build(name: str, regime: Regime) -> NamedOperator:
    """Build a named operator, specialized to the regime."""
    return NamedOperator(name, regime, operator_source(regime).get(name))


# --------------------------------------------------------------------------
# Pauli base change between spinor-pair and vector components
# --------------------------------------------------------------------------

def pauli_basis() -> TMap:
    """Column j holds the spinor-pair components of the j-th Pauli matrix.

    Convention: sigma_0 = id, sigma_1 = [[0,1],[1,0]],
    sigma_2 = [[0,-i],[i,0]], sigma_3 = [[1,0],[0,-1]].  The input leg
    pair encodes the vector index j in row-major order.
    """
    i = coeff.I
    m = TMap.zero((U, B), (U, B))
    cols = {
        0: {0: ONE, 3: ONE},
        1: {1: ONE, 2: ONE},
        2: {1: -i, 2: i},
        3: {0: ONE, 3: -ONE},
    }
    for j, col in cols.items():
        for r, v in col.items():
            m.entries[r][j] = v
    return m


def pauli_basis_inverse() -> TMap:
    c = pauli_basis()
    half = coeff.rat(1, 2)
    m = TMap.zero((U, B), (U, B))
    for j in range(4):
        for r in range(4):
            m.entries[j][r] = c.entries[r][j].star() * half
    return m


def vector_components(op: TMap, regime: Regime = GENERIC) -> TMap:
    """Conjugate a map on spinor pairs into vector (Pauli) components.

    Input/output legs must come in (unbarred, barred) pairs; the result's
    index pairs then encode vector indices 0..3 in row-major order.
    """
    from .tensor import SignatureMismatchError
    for sig in (op.in_sig, op.out_sig):
        if len(sig) % 2 or any(sig[2 * k:2 * k + 2] != (U, B)
                               for k in range(len(sig) // 2)):
            raise SignatureMismatchError(
                "vector components need (unbarred, barred) leg pairs")
    c = pauli_basis().specialize(regime)
    cinv = pauli_basis_inverse().specialize(regime)
    left = identity(op.out_sig)
    for k in range(len(op.out_sig) // 2):
        left = compose(place(cinv, (2 * k + 1, 2 * k + 2), op.out_sig), left)
    right = identity(op.in_sig)
    for k in range(len(op.in_sig) // 2):
        right = compose(right, place(c, (2 * k + 1, 2 * k + 2), op.in_sig))
    return compose(left, compose(op, right))


def classical_limit(op: TMap) -> TMap:
    """Exact substitution q = qb = t = 1 (epsilon untouched)."""
    return op.map_entries(lambda s: s.subst_half(GR_ONE, GR_ONE, GR_ONE))


# --------------------------------------------------------------------------
# Declarative matrix identities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """One factor of a product: operator at legs, or a scalar prefactor."""

    name: str
    legs: tuple[int, ...] = ()
    out_legs: tuple[int, ...] | None = None
    scalar: Scalar | None = None

    @staticmethod
    def s(value: Scalar) -> "Factor":
        return Factor("#", scalar=value)


@dataclass(frozen=True)
class MatrixIdentity:
    """lhs == rhs as exact matrices; factors listed left to right."""

    check_id: str
    ambient: tuple[Leg, ...]
    lhs: tuple[Factor, ...]
    rhs: tuple[Factor, ...]
    expect: str = "zero"  # residual lhs - rhs


def _evaluate_side(factors: tuple[Factor, ...], ambient: tuple[Leg, ...],
                   source: OperatorSource) -> TMap:
    acc: TMap | None = None
    sig = ambient
    pending = ONE
    for f in reversed(factors):
        if f.name == "#":
            sc = f.scalar.specialize(source.regime)
            for a in source.flip_atoms:
                sc = sc.flip_half(a)
            pending = pending * sc
            continue
        placed = place(source.get(f.name), f.legs, sig, f.out_legs)
        acc = placed if acc is None else compose(placed, acc)
        sig = placed.out_sig
    if acc is None:
        acc = identity(ambient)
    return acc if pending.is_one() else acc.scale(pending)


def run_matrix_identity(chk: MatrixIdentity, source: OperatorSource) -> CheckReport:
    def body():
        lhs = _evaluate_side(chk.lhs, chk.ambient, source)
        rhs = _evaluate_side(chk.rhs, chk.ambient, source)
        resid = lhs - rhs
        zero = resid.is_zero_map()
        if chk.expect == "zero":
            return zero, None if zero else _residual_str(resid), None
        return (not zero), _residual_str(resid), "nonzero as expected"

    mode = "expect-zero" if chk.expect == "zero" else "expect-nonzero"
    return _timed(chk.check_id, source.regime, mode, body)


def numeric_residual(chk: MatrixIdentity, source: OperatorSource,
                     q: complex, t: float, qbar: complex | None = None) -> float:
    """Re-run an identity with floating point matrix products."""

    def side(factors):
        acc = None
        sig = chk.ambient
        pending = 1.0 + 0j
        for f in reversed(factors):
            if f.name == "#":
                pending *= f.scalar.specialize(source.regime).eval(
                    q, t, source.regime, qbar)
                continue
            placed = place(source.get(f.name), f.legs, sig, f.out_legs)
            a = placed.to_numpy(q, t, source.regime, qbar)
            acc = a if acc is None else a @ acc
            sig = placed.out_sig
        return acc * pending

    return float(np.max(np.abs(side(chk.lhs) - side(chk.rhs))))


# --------------------------------------------------------------------------
# Suites
# --------------------------------------------------------------------------

def _moves_catalog() -> list[MatrixIdentity]:
    out = [
        MatrixIdentity(
            "moves/Xi.M.X", (U, B, U),
            (Factor("X^-1", (1, 2)), Factor("M", (2, 3)), Factor("X", (1, 2))),
            (Factor("X", (2, 3)), Factor("M", (1, 2)), Factor("X^-1", (2, 3)))),
        MatrixIdentity(
            "moves/M.Xi.Xi", (B, U, U),
            (Factor("M", (1, 2)), Factor("X^-1", (2, 3)), Factor("X^-1", (1, 2))),
            (Factor("X^-1", (2, 3)), Factor("X^-1", (1, 2)), Factor("M", (2, 3)))),
        MatrixIdentity(
            "moves/X.X.M", (U, U, B),
            (Factor("X", (1, 2)), Factor("X", (2, 3)), Factor("M", (1, 2))),
            (Factor("M", (2, 3)), Factor("X", (1, 2)), Factor("X", (2, 3)))),
    ]
    for sign, k in (("+", "K"), ("-", "K^-1")):
        out += [
            MatrixIdentity(
                f"moves/Xi.Xi.K{sign}", (B, B, U),
                (Factor("X^-1", (1, 2)), Factor("X^-1", (2, 3)), Factor(k, (1, 2))),
                (Factor(k, (2, 3)), Factor("X^-1", (1, 2)), Factor("X^-1", (2, 3)))),
            MatrixIdentity(
                f"moves/K{sign}.X.X", (U, B, B),
                (Factor(k, (1, 2)), Factor("X", (2, 3)), Factor("X", (1, 2))),
                (Factor("X", (2, 3)), Factor("X", (1, 2)), Factor(k, (2, 3)))),
            MatrixIdentity(
                f"moves/X.K{sign}.Xi", (B, U, B),
                (Factor("X", (1, 2)), Factor(k, (2, 3)), Factor("X^-1", (1, 2))),
                (Factor("X^-1", (2, 3)), Factor(k, (1, 2)), Factor("X", (2, 3)))),
        ]
    return out


_MOVE_PERTURBED = MatrixIdentity(
    "moves/X.X.M!perturbed-x", (U, U, B),
    (Factor("X!pert", (1, 2)), Factor("X!pert", (2, 3)), Factor("M", (1, 2))),
    (Factor("M", (2, 3)), Factor("X!pert", (1, 2)), Factor("X!pert", (2, 3))),
    expect="nonzero")


def _braid_catalog(regime: Regime) -> list[MatrixIdentity]:
    amb = (U, B, U, B, U, B)
    b12, b23 = (1, 2, 3, 4), (3, 4, 5, 6)
    out = []
    for name in ("Rhat+", "Rhat-", "Rhat+^-1", "Rhat-^-1"):
        out.append(MatrixIdentity(
            f"braid/{name}", amb,
            (Factor(name, b12), Factor(name, b23), Factor(name, b12)),
            (Factor(name, b23), Factor(name, b12), Factor(name, b23))))
    b13 = (1, 2, 5, 6)
    yb = []
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        yb = ["Ryb+"]
    elif regime.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
        yb = ["Ryb-"]
    else:
        yb = ["Ryb+", "Ryb-"]
    for name in yb:
        out.append(MatrixIdentity(
            f"braid/yang-baxter-{name[-1]}", amb,
            (Factor(name, b12), Factor(name, b13), Factor(name, b23)),
            (Factor(name, b23), Factor(name, b13), Factor(name, b12))))
    return out


_BRAID_PERTURBED = MatrixIdentity(
    "braid/Rhat+!perturbed-x", (U, B, U, B, U, B),
    (Factor("Rhat+!pert", (1, 2, 3, 4)), Factor("Rhat+!pert", (3, 4, 5, 6)),
     Factor("Rhat+!pert", (1, 2, 3, 4))),
    (Factor("Rhat+!pert", (3, 4, 5, 6)), Factor("Rhat+!pert", (1, 2, 3, 4)),
     Factor("Rhat+!pert", (3, 4, 5, 6))),
    expect="nonzero")


def suite_moves(regime: Regime, source: OperatorSource | None = None) -> list[CheckReport]:
    src = source or operator_source(regime)
    reports = [run_matrix_identity(c, src) for c in _moves_catalog()]
    reports.append(run_matrix_identity(_MOVE_PERTURBED, src))
    return reports


def suite_braid(regime: Regime, source: OperatorSource | None = None) -> list[CheckReport]:
    src = source or operator_source(regime)
    reports = [run_matrix_identity(c, src) for c in _braid_catalog(regime)]
    reports.append(run_matrix_identity(_BRAID_PERTURBED, src))
    return reports


def _spectral_combination(src: OperatorSource, coeffs: tuple[Scalar, ...]) -> TMap:
    names = (("P'", "Q'"), ("P", "Q"), ("P'", "Q"), ("P", "Q'"))
    mid: TMap | None = None
    for c, (a, b) in zip(coeffs, names):
        term = tensor_product(src.get(a), src.get(b)).scale(
            c.specialize(src.regime))
        mid = term if mid is None else mid + term
    return _conjugate_by_x(mid, src.get("X"), src.get("X^-1"))


def suite_spectral(regime: Regime, source: OperatorSource | None = None) -> list[CheckReport]:
    src = source or operator_source(regime)
    reports = []
    qi = Q ** -1
    qbi = QB ** -1
    generic = {
        "Rhat+": (Q * QB, qi * qbi, -(Q * qbi), -(qi * QB)),
        "Rhat-": (Q * qbi, qi * QB, -(Q * QB), -(qi * qbi)),
    }
    for name, coeffs in generic.items():
        def body(name=name, coeffs=coeffs):
            resid = src.get(name) - _spectral_combination(src, coeffs)
            z = resid.is_zero_map()
            return z, None if z else _residual_str(resid), None
        reports.append(_timed(f"spectral/decomp-{name[-1]}", regime,
                              "expect-zero", body))

    displayed = None
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        displayed = {"Rhat+": (ONE, ONE, -(Q ** 2), -(Q ** -2)),
                     "Rhat-": (Q ** 2, Q ** -2, -ONE, -ONE)}
    elif regime.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
        displayed = {"Rhat+": (Q ** 2, Q ** -2, -ONE, -ONE),
                     "Rhat-": (ONE, ONE, -(Q ** 2), -(Q ** -2))}
    if displayed:
        for name, coeffs in displayed.items():
            def body(name=name, coeffs=coeffs):
                resid = src.get(name) - _spectral_combination(src, coeffs)
                z = resid.is_zero_map()
                return z, None if z else _residual_str(resid), None
            reports.append(_timed(f"spectral/display-{name[-1]}", regime,
                                  "expect-zero", body))

    def idem():
        pm = src.get("Pminus")
        resid = compose(pm, pm) - pm
        z = resid.is_zero_map()
        return z, None if z else _residual_str(resid), None
    reports.append(_timed("spectral/pminus-idempotent", regime, "expect-zero", idem))

    def traces():
        want = {"Pminus": 6, "Pi9": 9, "Pi1": 1}
        bad = []
        for name, k in want.items():
            tr = src.get(name).trace()
            if tr != integer(k):
                bad.append(f"trace({name}) = {tr}")
        total = src.get("Pminus") + src.get("Pi9") + src.get("Pi1")
        if not total.equals(identity((U, B, U, B))):
            bad.append("projectors do not sum to the identity")
        for a, b in (("Pi9", "Pi1"), ("Pi9", "Pminus"), ("Pi1", "Pminus")):
            if not compose(src.get(a), src.get(b)).is_zero_map():
                bad.append(f"{a}{b} != 0")
        return not bad, "; ".join(bad) or None, "ranks 9 + 1 + 6"
    reports.append(_timed("spectral/projector-ranks", regime, "expect-zero", traces))

    if regime.kind is RegimeKind.UNIT_CIRCLE:
        def wsum():
            q1 = Q.specialize(regime)
            w = src.get("What")
            combo = src.get("Pi9").scale(q1) + src.get("Pi1").scale(q1 ** -3) \
                - src.get("Pminus").scale(q1 ** -1)
            resid = w - combo
            z = resid.is_zero_map()
            return z, None if z else _residual_str(resid), \
                "eigenvalues q, q^-3, -q^-1 with multiplicities 9, 1, 6"
        reports.append(_timed("spectral/w-spectral-sum", regime, "expect-zero", wsum))

        def won():
            q1 = Q.specialize(regime)
            pm = src.get("Pminus")
            w = src.get("What")
            r1 = compose(pm, w) + pm.scale(q1 ** -1)
            r2 = compose(w, pm) + pm.scale(q1 ** -1)
            z = r1.is_zero_map() and r2.is_zero_map()
            return z, None if z else _residual_str(r1 if not r1.is_zero_map() else r2), None
        reports.append(_timed("spectral/w-on-pminus", regime, "expect-zero", won))
    return reports


def suite_compat(regime: Regime, source: OperatorSource | None = None) -> list[CheckReport]:
    src = source or operator_source(regime)
    reports = []
    if regime.kind is RegimeKind.GENERIC:
        return [CheckReport("compat/skip", regime.label, "skip", "info",
                            detail="translation compatibility is regime-specific")]
    pm = src.get("Pminus")
    w = src.get("What")
    ident = identity((U, B, U, B))
    q1 = Q.specialize(regime)

    if regime.kind is RegimeKind.UNIT_CIRCLE:
        def zero_case():
            resid = compose(pm, w + ident.scale(q1 ** -1))
            z = resid.is_zero_map()
            return z, None if z else _residual_str(resid), "sigma = 1/q annihilates"
        reports.append(_timed("compat/braiding-scalar-zero", regime,
                              "expect-zero", zero_case))

        def one_case():
            resid = compose(pm, w + ident)
            if resid.is_zero_map():
                return False, "residual is zero", None
            qsq_minus_1 = Q ** 2 - ONE
            divisible = any(
                v.numerator_divisible_by(qsq_minus_1)
                for row in resid.entries for v in row if not v.is_zero())
            at_q1 = resid.map_entries(
                lambda s: s.subst_half(GR_ONE, GR_ONE, None))
            vanishes = at_q1.is_zero_map()
            ok = divisible and vanishes
            note = "nonzero; a nonzero entry numerator is divisible by q^2-1; " \
                   "all entries vanish at q = 1"
            return ok, None if ok else _residual_str(resid), note
        reports.append(_timed("compat/sigma-one-obstructed", regime,
                              "expect-nonzero", one_case))
    else:
        for label, sigma in (("one", ONE), ("q", Q), ("qinv", Q ** -1)):
            def nz(sigma=sigma):
                resid = compose(pm, w + ident.scale(sigma.specialize(regime)))
                return (not resid.is_zero_map()), _residual_str(resid), \
                    "no constant braiding scalar works for real q"
            reports.append(_timed(f"compat/sigma-{label}-nonzero", regime,
                                  "expect-nonzero", nz))

        def divis():
            resid = compose(pm, w + ident)
            fac = Q ** 2 - ONE
            bad = [
                f"entry[{i}][{j}]"
                for i, row in enumerate(resid.entries)
                for j, v in enumerate(row)
                if not v.is_zero() and not v.numerator_divisible_by(fac)]
            ok = not bad and not resid.is_zero_map()
            return ok, "; ".join(bad[:4]) or None, \
                "all residual entries divisible by q^2-1"
        reports.append(_timed("compat/sigma-one-divisibility", regime,
                              "expect-zero", divis))

    def classical():
        resid = classical_limit(compose(pm, w + ident))
        z = resid.is_zero_map()
        return z, None if z else _residual_str(resid), "q = t = 1 limit"
    reports.append(_timed("compat/classical-limit-zero", regime,
                          "expect-zero", classical))
    return reports


def _crossed_catalog(regime: Regime) -> list[MatrixIdentity]:
    out = []
    for variant in ("first", "second"):
        s = f"S:{variant}"
        t = f"T:{variant}"
        tp = f"T':{variant}"
        out.append(MatrixIdentity(
            f"crossed/S.S.E:{variant}", (U,),
            (Factor(s, (1, 2)), Factor(s, (2, 3)), Factor("E", (), (1, 2))),
            (Factor("E", (), (2, 3)),)))
        out.append(MatrixIdentity(
            f"crossed/T.T.E:{variant}", (U, B),
            (Factor(f"Tfull:{variant}", (1, 2, 3)), Factor(f"Tfull:{variant}", (2, 3, 4)),
             Factor("E", (), (1, 2))),
            (Factor("E", (), (3, 4)),)))
        # same identity for the rescaled crossing, scalar made explicit
        out.append(MatrixIdentity(
            f"crossed/T.T.E-rescaled:{variant}", (U, B),
            (Factor(t, (1, 2, 3)), Factor(t, (2, 3, 4)), Factor("E", (), (1, 2))),
            (Factor.s(T ** -1), Factor("E", (), (3, 4)))))
        out.append(MatrixIdentity(
            f"crossed/X.T.T':{variant}", (U, B, U, B),
            (Factor("X", (3, 4)), Factor(t, (1, 2, 3)), Factor(tp, (2, 3, 4))),
            (Factor(tp, (1, 2, 3)), Factor(t, (2, 3, 4)), Factor("X", (1, 2)))))
        for rname in ("Rhat+", "Rhat-"):
            out.append(MatrixIdentity(
                f"crossed/{rname}.T.T:{variant}", (U, U, B, U, B),
                (Factor(rname, (1, 2, 3, 4)), Factor(t, (3, 4, 5)),
                 Factor(t, (1, 2, 3))),
                (Factor(t, (3, 4, 5)), Factor(t, (1, 2, 3)),
                 Factor(rname, (2, 3, 4, 5)))))
    out.append(MatrixIdentity(
        "crossed/X.X.E-shuttle", (B,),
        (Factor("X", (1, 2)), Factor("X", (2, 3)), Factor("E", (), (1, 2))),
        (Factor.s(T ** -1), Factor("E", (), (2, 3)))))
    out.append(MatrixIdentity(
        "crossed/E'.X.X-shuttle", (U, U, B),
        (Factor("E'", (2, 3), ()), Factor("X", (1, 2)), Factor("X", (2, 3))),
        (Factor.s(T ** -1), Factor("E'", (1, 2), ()))))

    # commutation matrix between translations and the 4-dim representation
    if regime.kind is RegimeKind.GENERIC:
        scalars = {"first": (Q_HALF ** -1) * QB_HALF, "second": Q_HALF * (QB_HALF ** -1)}
    else:
        wf = (Q ** -1) if regime.kind is RegimeKind.UNIT_CIRCLE else ONE
        scalars = {"first": wf, "second": wf ** -1}
    for variant, sc in scalars.items():
        rname = "Rhat-" if variant == "first" else "Rhat-^-1"
        out.append(MatrixIdentity(
            f"crossed/xh-matrix:{variant}", (U, B, U, B),
            (Factor("X", (2, 3)), Factor(f"S:{variant}", (1, 2)),
             Factor(f"tauSbarInvTau:{variant}", (3, 4)), Factor("X^-1", (2, 3))),
            (Factor.s(sc), Factor(rname, (1, 2, 3, 4)))))
    return out


def _sse_scan_matrices(src: OperatorSource):
    """The four bilinear pieces of S12 S23 E12 with S = a*I + b*EE'."""
    amb = (U,)
    e12 = place(src.get("E"), (), amb, (1, 2))
    e23 = place(src.get("E"), (), amb, (2, 3))
    ee = compose(src.get("E"), src.get("E'"))
    sig3 = e12.out_sig
    ee12 = place(ee, (1, 2), sig3)
    ee23 = place(ee, (2, 3), sig3)
    z_a2 = e12
    z_ab = compose(ee12, e12) + compose(ee23, e12)
    z_b2 = compose(ee12, compose(ee23, e12))
    return z_a2, z_ab, z_b2, e23


def suite_crossed(regime: Regime, source: OperatorSource | None = None) -> list[CheckReport]:
    src = source or operator_source(regime)
    reports = [run_matrix_identity(c, src) for c in _crossed_catalog(regime)]

    def scan():
        z_a2, z_ab, z_b2, e23 = _sse_scan_matrices(src)
        rows = []
        for i in range(len(z_a2.entries)):
            for j in range(len(z_a2.entries[0])):
                row = [z_a2.entries[i][j], z_ab.entries[i][j],
                       z_b2.entries[i][j], -e23.entries[i][j]]
                if any(not v.is_zero() for v in row):
                    rows.append(row)
        qq = (Q + Q ** -1).specialize(regime)
        expected = [[ONE, -qq, ONE, ZERO], [ZERO, ONE, ZERO, -ONE]]
        ok = span_equal(rows, expected)
        return ok, None if ok else "constraint span differs", \
            "constraints reduce to a*b = 1 and a^2 + b^2 = q + 1/q, " \
            "so a^2 is q or 1/q: exactly the two admissible normalizations"
    reports.append(_timed("crossed/normalization-scan", regime, "expect-zero", scan))

    def nonsolution():
        z_a2, z_ab, z_b2, e23 = _sse_scan_matrices(src)
        resid = z_a2 + z_ab + z_b2 - e23  # a = b = 1
        return (not resid.is_zero_map()), _residual_str(resid), \
            "a = b = 1 violates the shuttle condition"
    reports.append(_timed("crossed/sse-nonsolution", regime,
                          "expect-nonzero", nonsolution))

    for variant in ("first", "second"):
        def star_involution(variant=variant):
            tmat = src.get(f"T:{variant}")
            tpmat = src.get(f"T':{variant}")
            n = 8
            acc = [[ZERO] * n for _ in range(n)]
            for rp in range(n):
                L, Kk, A = (rp >> 2) & 1, (rp >> 1) & 1, rp & 1
                for cp in range(n):
                    v = tpmat.entries[rp][cp]
                    if v.is_zero():
                        continue
                    sv = v.star(src.regime)
                    E, Mm, N = (cp >> 2) & 1, (cp >> 1) & 1, cp & 1
                    trow = (N << 2) | (Mm << 1) | E
                    for ccol in range(n):
                        tv = tmat.entries[trow][ccol]
                        if tv.is_zero():
                            continue
                        col = (A << 2) | (Kk << 1) | L
                        acc[ccol][col] = acc[ccol][col] + sv * tv
            bad = None
            for i in range(n):
                for j in range(n):
                    want = ONE if i == j else ZERO
                    if acc[i][j] != want:
                        bad = f"entry[{i}][{j}] = {acc[i][j]}"
                        break
                if bad:
                    break
            return bad is None, bad, "double star-flip returns every generator pair"
        reports.append(_timed(f"crossed/star-involution:{variant}", regime,
                              "expect-zero", star_involution))
    return reports


def identity_catalog(regime: Regime) -> list[MatrixIdentity]:
    """Every declarative identity of the suites, for numeric mirroring."""
    return _moves_catalog() + _braid_catalog(regime) + _crossed_catalog(regime)


def numeric_suite(regime: Regime, q: complex, t: float,
                  qbar: complex | None = None) -> dict[str, float]:
    """Residual max-norms of every declarative identity at a sample point."""
    src = operator_source(regime)
    out = {}
    for chk in identity_catalog(regime):
        out[chk.check_id] = numeric_residual(chk, src, q, t, qbar)
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        pm = src.get("Pminus").to_numpy(q, t, regime)
        w = src.get("What").to_numpy(q, t, regime)
        ident = np.eye(16)
        out["compat/braiding-scalar-zero"] = float(
            np.max(np.abs(pm @ (w + ident / q))))
    return out
