"""Typed multi-leg linear maps over exact scalars.

A TMap sends a tensor product of 2-dimensional legs to another one.  Legs
are typed: unbarred (the defining C^2) or barred (its conjugate), and the
types are enforced at placement and composition time because several of
the structure maps swap bar-types.  Basis order is row major over the leg
indices with leg 1 most significant, each leg indexed 1, 2.
"""

from __future__ import annotations

from enum import Enum
from itertools import product

import numpy as np

from .coeff import GENERIC, ONE, ZERO, Regime, Scalar

__all__ = [
    "Leg", "U", "B", "TMap",
    "TypeMismatchError", "ArityMismatchError", "SignatureMismatchError",
    "compose", "place", "tensor_product", "bar_conjugate", "tau_conjugate",
    "permutation", "flip", "identity",
    "row_echelon", "annihilator_basis", "nullspace_basis", "span_equal",
    "invert", "sig_str",
]


class TypeMismatchError(TypeError):
    """Leg types at the requested positions do not match the operator."""


class ArityMismatchError(TypeError):
    """Number of positions does not match the operator's legs."""


class SignatureMismatchError(TypeError):
    """Composition of maps with incompatible signatures."""


class Leg(Enum):
    U = "u"   # unbarred C^2
    B = "b"   # barred (conjugate) copy

    def bar(self) -> "Leg":
        return Leg.B if self is Leg.U else Leg.U


U = Leg.U
B = Leg.B

Signature = tuple[Leg, ...]


def sig_str(sig: Signature) -> str:
    return "(" + ",".join(l.value for l in sig) + ")"


def _dim(sig: Signature) -> int:
    return 1 << len(sig)


def _bits_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def _index_of(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


class TMap:
    """Exact linear map between typed tensor products of 2-dim legs."""

    __slots__ = ("in_sig", "out_sig", "entries")

    def __init__(self, in_sig: Signature, out_sig: Signature,
                 entries: list[list[Scalar]]):
        in_sig = tuple(in_sig)
        out_sig = tuple(out_sig)
        if len(entries) != _dim(out_sig) or any(len(r) != _dim(in_sig) for r in entries):
            raise SignatureMismatchError("entry matrix shape does not match signatures")
        self.in_sig = in_sig
        self.out_sig = out_sig
        self.entries = entries

    @staticmethod
    def zero(in_sig: Signature, out_sig: Signature) -> "TMap":
        return TMap(in_sig, out_sig,
                    [[ZERO] * _dim(in_sig) for _ in range(_dim(out_sig))])

    def map_entries(self, fn) -> "TMap":
        return TMap(self.in_sig, self.out_sig,
                    [[fn(v) for v in row] for row in self.entries])

    def __add__(self, other: "TMap") -> "TMap":
        if self.in_sig != other.in_sig or self.out_sig != other.out_sig:
            raise SignatureMismatchError("sum of maps with different signatures")
        return TMap(self.in_sig, self.out_sig,
                    [[a + b for a, b in zip(r1, r2)]
                     for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "TMap") -> "TMap":
        return self + other.scale(-ONE)

    def scale(self, c: Scalar) -> "TMap":
        return self.map_entries(lambda v: v * c)

    def is_zero_map(self) -> bool:
        return all(v.is_zero() for row in self.entries for v in row)

    def equals(self, other: "TMap") -> bool:
        if self.in_sig != other.in_sig or self.out_sig != other.out_sig:
            return False
        return (self - other).is_zero_map()

    def first_nonzero(self) -> tuple[int, int, Scalar] | None:
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if not v.is_zero():
                    return i, j, v
        return None

    def trace(self) -> Scalar:
        if self.in_sig != self.out_sig:
            raise SignatureMismatchError("trace of a non-square map")
        out = ZERO
        for k in range(_dim(self.in_sig)):
            out = out + self.entries[k][k]
        return out

    def specialize(self, regime: Regime) -> "TMap":
        return self.map_entries(lambda v: v.specialize(regime))

    def to_numpy(self, q: complex, t: float, regime: Regime = GENERIC,
                 qbar: complex | None = None) -> np.ndarray:
        out = np.zeros((len(self.entries), len(self.entries[0])), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if not v.is_zero():
                    out[i, j] = v.eval(q, t, regime, qbar)
        return out

    def to_json_dict(self) -> dict:
        return {
            "in_sig": [l.value for l in self.in_sig],
            "out_sig": [l.value for l in self.out_sig],
            "entries": [[str(v) for v in row] for row in self.entries],
        }

    def __repr__(self) -> str:
        return f"TMap {sig_str(self.in_sig)} -> {sig_str(self.out_sig)}"


def identity(sig: Signature) -> TMap:
    n = _dim(tuple(sig))
    m = TMap.zero(sig, sig)
    for k in range(n):
        m.entries[k][k] = ONE
    return m


def compose(f: TMap, g: TMap) -> TMap:
    """Matrix product f after g."""
    if g.out_sig != f.in_sig:
        raise SignatureMismatchError(
            f"cannot compose {sig_str(f.in_sig)}<-... with ...->{sig_str(g.out_sig)}")
    out = TMap.zero(g.in_sig, f.out_sig)
    ge = g.entries
    width = len(ge[0])
    for i, frow in enumerate(f.entries):
        orow = out.entries[i]
        for k, fv in enumerate(frow):
            if fv.is_zero():
                continue
            grow = ge[k]
            for j in range(width):
                gv = grow[j]
                if gv.is_zero():
                    continue
                orow[j] = orow[j] + fv * gv
    return out


def tensor_product(f: TMap, g: TMap) -> TMap:
    out = TMap.zero(f.in_sig + g.in_sig, f.out_sig + g.out_sig)
    dg_in = _dim(g.in_sig)
    dg_out = _dim(g.out_sig)
    for i1, r1 in enumerate(f.entries):
        for j1, v1 in enumerate(r1):
            if v1.is_zero():
                continue
            for i2, r2 in enumerate(g.entries):
                for j2, v2 in enumerate(r2):
                    if v2.is_zero():
                        continue
                    out.entries[i1 * dg_out + i2][j1 * dg_in + j2] = v1 * v2
    return out


def place(op: TMap, legs: tuple[int, ...], ambient: Signature,
          out_legs: tuple[int, ...] | None = None) -> TMap:
    """Embed op into an ambient space, acting on the listed legs (1-based).

    legs picks the input legs of the ambient space fed to op, in order;
    the order need not be increasing.  For arity-preserving operators the
    output legs default to the same positions with their types replaced by
    op's output types.  Vectors (no input legs) need explicit out_legs:
    positions of the inserted legs in the result signature.  Functionals
    (no output legs) simply drop their input positions.
    """
    ambient = tuple(ambient)
    legs = tuple(legs)
    n_in = len(op.in_sig)
    n_out = len(op.out_sig)
    if len(legs) != n_in:
        raise ArityMismatchError(f"need {n_in} leg positions, got {len(legs)}")
    if len(set(legs)) != len(legs):
        raise ArityMismatchError("duplicate leg positions")
    for k, p in enumerate(legs):
        if not 1 <= p <= len(ambient):
            raise ArityMismatchError(f"leg position {p} outside ambient space")
        if ambient[p - 1] != op.in_sig[k]:
            raise TypeMismatchError(
                f"ambient leg {p} has type {ambient[p - 1].value}, "
                f"operator expects {op.in_sig[k].value}")
    spect_in = [p for p in range(1, len(ambient) + 1) if p not in legs]
    if out_legs is None:
        if n_out == n_in:
            out_legs = legs
        elif n_out == 0:
            out_legs = ()
        else:
            raise ArityMismatchError("arity-raising placement needs out_legs")
    out_legs = tuple(out_legs)
    if len(out_legs) != n_out:
        raise ArityMismatchError(f"need {n_out} output positions, got {len(out_legs)}")
    n_amb_out = len(spect_in) + n_out
    if sorted(out_legs) != sorted(set(out_legs)) or any(
            not 1 <= p <= n_amb_out for p in out_legs):
        raise ArityMismatchError("bad output leg positions")
    out_ambient: list[Leg | None] = [None] * n_amb_out
    for k, p in enumerate(out_legs):
        out_ambient[p - 1] = op.out_sig[k]
    spect_out = [p + 1 for p in range(n_amb_out) if out_ambient[p] is None]
    for p, s in zip(spect_out, spect_in):
        out_ambient[p - 1] = ambient[s - 1]
    out_sig = tuple(out_ambient)

    result = TMap.zero(ambient, out_sig)
    n_spect = len(spect_in)
    for r, row in enumerate(op.entries):
        rbits = _bits_of(r, n_out)
        for c, v in enumerate(row):
            if v.is_zero():
                continue
            cbits = _bits_of(c, n_in)
            for s in product((0, 1), repeat=n_spect):
                col_bits = [0] * len(ambient)
                for k, p in enumerate(legs):
                    col_bits[p - 1] = cbits[k]
                for k, p in enumerate(spect_in):
                    col_bits[p - 1] = s[k]
                row_bits = [0] * n_amb_out
                for k, p in enumerate(out_legs):
                    row_bits[p - 1] = rbits[k]
                for k, p in enumerate(spect_out):
                    row_bits[p - 1] = s[k]
                result.entries[_index_of(row_bits)][_index_of(col_bits)] = v
    return result


def bar_conjugate(f: TMap, regime: Regime = GENERIC) -> TMap:
    """Entrywise conjugation; every leg toggles its bar-type."""
    return TMap(tuple(l.bar() for l in f.in_sig),
                tuple(l.bar() for l in f.out_sig),
                [[v.star(regime) for v in row] for row in f.entries])


def tau_conjugate(f: TMap, regime: Regime = GENERIC) -> TMap:
    """tau . bar(f) . tau for a map with two input and two output legs."""
    if len(f.in_sig) != 2 or len(f.out_sig) != 2:
        raise ArityMismatchError("tau conjugation needs 2-leg maps")
    g = bar_conjugate(f, regime)
    swap = {0: 0, 1: 2, 2: 1, 3: 3}
    entries = [[g.entries[swap[i]][swap[j]] for j in range(4)] for i in range(4)]
    return TMap((g.in_sig[1], g.in_sig[0]), (g.out_sig[1], g.out_sig[0]), entries)


def permutation(sig: Signature, perm: tuple[int, ...]) -> TMap:
    """Map e_{i_1..i_n} -> reordered legs; output leg k is input leg perm[k]."""
    sig = tuple(sig)
    n = len(sig)
    if sorted(perm) != list(range(1, n + 1)):
        raise ArityMismatchError("perm must list 1..n exactly once")
    out_sig = tuple(sig[p - 1] for p in perm)
    m = TMap.zero(sig, out_sig)
    for c in range(_dim(sig)):
        bits = _bits_of(c, n)
        rbits = tuple(bits[p - 1] for p in perm)
        m.entries[_index_of(rbits)][c] = ONE
    return m


def flip(a: Leg, b: Leg) -> TMap:
    return permutation((a, b), (2, 1))


# --------------------------------------------------------------------------
# Exact linear algebra
# --------------------------------------------------------------------------

def row_echelon(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form over the scalar field; exact arithmetic.

    Pivots on the first nonzero entry in column order.  Returns the
    nonzero rows and their pivot columns.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    out: list[list[Scalar]] = []
    work = rows
    col = 0
    while work and col < ncols:
        pivot_row = None
        for r in work:
            if not r[col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        inv = pivot_row[col].inverse()
        pivot_row = [v * inv for v in pivot_row]
        for r in work:
            c = r[col]
            if not c.is_zero():
                for j in range(col, ncols):
                    r[j] = r[j] - c * pivot_row[j]
        for r in out:
            c = r[col]
            if not c.is_zero():
                for j in range(col, ncols):
                    r[j] = r[j] - c * pivot_row[j]
        out.append(pivot_row)
        pivots.append(col)
        col += 1
    return out, pivots


def annihilator_basis(p: TMap) -> list[TMap]:
    """Functionals vanishing on ker p: a basis of p's row space.

    p must be square.  Exact Gaussian elimination; returns rank(p)
    independent functionals.
    """
    if p.in_sig != p.out_sig:
        raise SignatureMismatchError("annihilator basis needs a square map")
    rows, _ = row_echelon(p.entries)
    return [TMap(p.in_sig, (), [row]) for row in rows]


def nullspace_basis(p: TMap) -> list[TMap]:
    """Vectors spanning ker p, as maps from the empty signature."""
    rows, pivots = row_echelon(p.entries)
    ncols = _dim(p.in_sig)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for row, pc in zip(rows, pivots):
            vec[pc] = -row[fc]
        out.append(TMap((), p.in_sig, [[v] for v in vec]))
    return out


def span_equal(rows_a: list[list[Scalar]], rows_b: list[list[Scalar]]) -> bool:
    """Exact equality of the row spans (canonical RREF comparison)."""
    ra, pa = row_echelon(rows_a)
    rb, pb = row_echelon(rows_b)
    if pa != pb or len(ra) != len(rb):
        return False
    for r1, r2 in zip(ra, rb):
        for v1, v2 in zip(r1, r2):
            if v1 != v2:
                return False
    return True


def invert(f: TMap) -> TMap:
    """Exact inverse of a dimension-preserving map; raises on singular input."""
    if len(f.in_sig) != len(f.out_sig):
        raise SignatureMismatchError("inverse of a non-square map")
    n = _dim(f.in_sig)
    aug = [list(row) + [ONE if j == i else ZERO for j in range(n)]
           for i, row in enumerate(f.entries)]
    rows, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("map is singular")
    entries = [row[n:] for row in rows]
    return TMap(f.out_sig, f.in_sig, entries)
