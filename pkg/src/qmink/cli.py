"""Command line interface: verify suites, print relation tables, reduce
expressions to normal form, report the ordering obstruction, evaluate the
identity suites numerically.

Exit codes: 0 when every executed check behaves as expected (negative
controls count as pass when they fail as designed), 1 on an unexpected
check failure, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

import cmath

from . import algebras, coeff, intertwiners
from .coeff import ONE, Regime, RegimeKind, Scalar, ZERO, regime_from_label
from .rewrite import Alphabet, NCPoly, RewriteSystem, UnknownGeneratorError

__all__ = ["main", "parse_expr", "ParseContext", "ExprSyntaxError",
           "UnknownSymbolError", "NoncommutativeDivisionError"]

VERSION = "0.1.0"


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownSymbolError(ValueError):
    pass


class NoncommutativeDivisionError(ValueError):
    pass


# --------------------------------------------------------------------------
# Expression grammar
# --------------------------------------------------------------------------

@dataclass
class ParseContext:
    alphabet: Alphabet
    regime: Regime


_SCALAR_ATOMS = {"q": coeff.Q, "qb": coeff.QB, "t": coeff.T, "i": coeff.I}
_HALF_ATOMS = {"q": coeff.Q_HALF, "qb": coeff.QB_HALF, "t": coeff.T_HALF}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.toks: list[tuple[str, str, int]] = []
        self._scan()
        self.k = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("num", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                name = text[i:j]
                while j < len(text) and text[j] == "'":
                    name += "'"
                    j += 1
                self.toks.append(("name", name, i))
                i = j
                continue
            if ch in "+-*/^()[],'":
                self.toks.append((ch, ch, i))
                i += 1
                continue
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok


def _scalar_poly(ctx: ParseContext, s: Scalar) -> NCPoly:
    return NCPoly.scalar(ctx.alphabet, s.specialize(ctx.regime))


def _as_scalar(p: NCPoly, pos: int) -> Scalar:
    if any(w for w in p.terms):
        raise NoncommutativeDivisionError(
            f"division/inverse needs a scalar subexpression (at position {pos})")
    return p.terms.get((), ZERO)


def parse_expr(text: str, ctx: ParseContext) -> NCPoly:
    """Parse the ASCII grammar into an exact noncommutative polynomial."""
    toks = _Tokens(text)
    out = _parse_sum(toks, ctx)
    tok = toks.peek()
    if tok[0] != "eof":
        raise ExprSyntaxError(f"trailing input {tok[1]!r}", tok[2])
    return out


def _parse_sum(toks: _Tokens, ctx: ParseContext) -> NCPoly:
    negate = False
    if toks.peek()[0] in "+-":
        negate = toks.next()[0] == "-"
    out = _parse_term(toks, ctx)
    if negate:
        out = -out
    while toks.peek()[0] in "+-":
        op = toks.next()[0]
        rhs = _parse_term(toks, ctx)
        out = out + rhs if op == "+" else out - rhs
    return out


def _parse_term(toks: _Tokens, ctx: ParseContext) -> NCPoly:
    out = _parse_factor(toks, ctx)
    while toks.peek()[0] in "*/":
        op, _, pos = toks.next()
        rhs = _parse_factor(toks, ctx)
        if op == "*":
            out = out * rhs
        else:
            out = out.scale(_as_scalar(rhs, pos).inverse())
    return out


def _parse_factor(toks: _Tokens, ctx: ParseContext) -> NCPoly:
    if toks.peek()[0] == "-":
        toks.next()
        return -_parse_factor(toks, ctx)
    base_name = toks.peek()[1] if toks.peek()[0] == "name" else None
    out = _parse_primary(toks, ctx)
    while toks.peek()[0] == "^":
        _, _, pos = toks.next()
        kind_e, val = _parse_exponent(toks)
        if kind_e == "half":
            if base_name not in _HALF_ATOMS:
                raise ExprSyntaxError("half powers only apply to q, qb, t", pos)
            out = _scalar_poly(ctx, _HALF_ATOMS[base_name] ** val)
        else:
            out = _poly_pow(out, val, pos)
        base_name = None
    return out


def _parse_exponent(toks: _Tokens) -> tuple[str, int]:
    """Integer exponent, or (k/2) half-integer form for the base atoms."""
    neg = False
    if toks.peek()[0] == "-":
        toks.next()
        neg = True
    tok = toks.peek()
    if tok[0] == "num":
        toks.next()
        n = int(tok[1])
        return "int", (-n if neg else n)
    if tok[0] == "(":
        toks.next()
        inner_neg = False
        if toks.peek()[0] == "-":
            toks.next()
            inner_neg = True
        num = int(toks.expect("num")[1])
        sign = -1 if (neg ^ inner_neg) else 1
        if toks.peek()[0] == "/":
            toks.next()
            den = int(toks.expect("num")[1])
            toks.expect(")")
            if den != 2:
                raise ExprSyntaxError("only /2 fractional exponents are supported",
                                      tok[2])
            return "half", sign * num
        toks.expect(")")
        return "int", sign * num
    raise ExprSyntaxError("expected an exponent", tok[2])


def _poly_pow(p: NCPoly, k: int, pos: int) -> NCPoly:
    if k < 0:
        return NCPoly.scalar(p.alphabet, _as_scalar(p, pos).inverse() ** (-k))
    out = NCPoly.scalar(p.alphabet, ONE)
    for _ in range(k):
        out = out * p
    return out


def _parse_primary(toks: _Tokens, ctx: ParseContext) -> NCPoly:
    kind, value, pos = toks.next()
    if kind == "num":
        return _scalar_poly(ctx, coeff.integer(int(value)))
    if kind == "(":
        inner = _parse_sum(toks, ctx)
        toks.expect(")")
        return inner
    if kind == "[":
        left = _parse_sum(toks, ctx)
        toks.expect(",")
        right = _parse_sum(toks, ctx)
        toks.expect("]")
        return left * right - right * left
    if kind == "name":
        if value == "star":
            toks.expect("(")
            inner = _parse_sum(toks, ctx)
            toks.expect(")")
            return inner.star(ctx.regime)
        if value in _SCALAR_ATOMS:
            return _scalar_poly(ctx, _SCALAR_ATOMS[value])
        if value.rstrip("'") in ("u", "ub", "x", "h") and toks.peek()[0] == "[":
            toks.next()
            a = int(toks.expect("num")[1])
            toks.expect(",")
            b = int(toks.expect("num")[1])
            toks.expect("]")
            primes = value[len(value.rstrip("'")):]
            while toks.peek()[0] == "'":
                toks.next()
                primes += "'"
            stem = value.rstrip("'")
            if stem == "x":
                name = algebras.PAIR_NAMES[((a - 1) << 1) | (b - 1)] + primes
            elif stem == "h":
                name = f"h[{a},{b}]" + primes
            else:
                name = f"{stem}[{a},{b}]" + primes
            return _generator(ctx, name, pos)
        return _generator(ctx, value, pos)
    raise ExprSyntaxError(f"unexpected token {value!r}", pos)


def _generator(ctx: ParseContext, name: str, pos: int) -> NCPoly:
    try:
        return NCPoly.word(ctx.alphabet, (name,))
    except UnknownGeneratorError:
        raise UnknownSymbolError(
            f"unknown symbol {name!r} in this regime (at position {pos})") from None


_PRETTY = {
    "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ",
    "qb": "q̄", "star": "∗", "*": "·",
}
_SUPERS = str.maketrans("0123456789-", "⁰¹²³⁴⁵"
                                        "⁶⁷⁸⁹⁻")


def unicode_pretty(text: str) -> str:
    """Unicode rendering of the ASCII grammar, for documentation output."""
    import re
    out = re.sub(r"\bqb\b", _PRETTY["qb"], text)
    for name in ("alpha", "beta", "gamma", "delta"):
        out = re.sub(rf"\b{name}\b", _PRETTY[name], out)
    out = re.sub(r"\^(-?\d+)(?!/)", lambda m: m.group(1).translate(_SUPERS), out)
    out = out.replace("star(", _PRETTY["star"] + "(")
    return out.replace("*", _PRETTY["*"])


# --------------------------------------------------------------------------
# Regime systems for nf
# --------------------------------------------------------------------------

_NF_CACHE: dict[str, tuple[Alphabet, RewriteSystem]] = {}


def nf_system(regime: Regime) -> tuple[Alphabet, RewriteSystem]:
    hit = _NF_CACHE.get(regime.label)
    if hit is None:
        hit = algebras.full_system(regime)
        _NF_CACHE[regime.label] = hit
    return hit


# --------------------------------------------------------------------------
# Suite registry
# --------------------------------------------------------------------------

SUITES = {
    "moves": intertwiners.suite_moves,
    "braid": intertwiners.suite_braid,
    "spectral": intertwiners.suite_spectral,
    "compat": intertwiners.suite_compat,
    "crossed": intertwiners.suite_crossed,
    "pbw": algebras.suite_pbw,
    "delta": algebras.suite_delta,
    "length": algebras.suite_length,
    "classical": algebras.suite_classical,
}

SUITE_ORDER = ("moves", "braid", "spectral", "compat", "crossed",
               "pbw", "delta", "length", "classical")


def run_suites(regime: Regime, which: str) -> list[intertwiners.CheckReport]:
    names = SUITE_ORDER if which == "all" else (which,)
    reports = []
    for name in names:
        reports.extend(SUITES[name](regime))
    reports.sort(key=lambda r: r.check_id)
    return reports


def _summary(reports) -> dict:
    return {
        "passed": sum(r.status == "pass" for r in reports),
        "failed": sum(r.status == "fail" for r in reports),
        "skipped": sum(r.status == "skip" for r in reports),
    }


def _report_json(regime: Regime, reports) -> dict:
    return {
        "version": VERSION,
        "regime": regime.label,
        "checks": [r.to_json_dict() for r in reports],
        "summary": _summary(reports),
    }


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    regime = regime_from_label(args.regime)
    t0 = time.perf_counter()
    reports = run_suites(regime, args.suite)
    elapsed = time.perf_counter() - t0
    payload = _report_json(regime, reports)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for r in reports:
            line = f"{r.status.upper():5s} {r.check_id} ({r.elapsed_ms:.1f} ms)"
            if r.mode == "expect-nonzero":
                line += " [expected-nonzero]"
            if r.status == "fail" and r.residual:
                line += f"  residual: {r.residual}"
            print(line)
        s = payload["summary"]
        print(f"{s['passed']} passed, {s['failed']} failed, "
              f"{s['skipped']} skipped in {elapsed:.2f} s "
              f"[regime {regime.label}]")
    return 0 if payload["summary"]["failed"] == 0 else 1


def _cmd_relations(args) -> int:
    regime = regime_from_label(args.regime)
    alg = algebras.minkowski_system(regime)
    sysr = alg.system
    rows = []
    for lhs in sorted(sysr.rules, key=lambda w: (len(w), w)):
        lhs_str = "*".join(sysr.alphabet.name(k) for k in lhs)
        rows.append({"lhs": lhs_str, "rhs": str(sysr.rules[lhs])})
    if args.format == "json":
        print(json.dumps({
            "regime": regime.label,
            "ordering": list(algebras.x_order(regime)),
            "rules": rows,
        }, indent=2))
    else:
        render = unicode_pretty if args.pretty else (lambda s: s)
        print(f"# oriented relations, regime {regime.label}, "
              f"ordering {' < '.join(render(n) for n in algebras.x_order(regime))}")
        for row in rows:
            print(f"{render(row['lhs'])} -> {render(row['rhs'])}")
    return 0


def _cmd_nf(args) -> int:
    regime = regime_from_label(args.regime)
    alph, system = nf_system(regime)
    ctx = ParseContext(alph, regime)
    try:
        poly = parse_expr(args.expr, ctx)
    except (ExprSyntaxError, UnknownSymbolError, NoncommutativeDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = str(system.normal_form(poly))
    print(unicode_pretty(out) if args.pretty else out)
    return 0


def _cmd_obstruction(args) -> int:
    aad, abg, diff = algebras.pbw_obstruction_generic()
    f1 = ONE - (coeff.Q * coeff.QB) ** 2
    f2 = coeff.QB ** 2 - coeff.Q ** 2
    print("ordering obstruction of q(qb^2+1) gamma*beta*alpha (generic regime)")
    print(f"  coefficient at alpha*alpha*delta: {aad}")
    print(f"  coefficient at alpha*beta*gamma:  {abg}")
    checks = {
        "nonzero in generic": not (aad.is_zero() or abg.is_zero()),
        "divisible by 1-(q*qb)^2": aad.numerator_divisible_by(f1)
        and abg.numerator_divisible_by(f1),
        "divisible by qb^2-q^2": aad.numerator_divisible_by(f2)
        and abg.numerator_divisible_by(f2),
        "vanishes on |q|=1": aad.specialize(coeff.UNIT_CIRCLE).is_zero()
        and abg.specialize(coeff.UNIT_CIRCLE).is_zero(),
        "vanishes for real q": aad.specialize(coeff.REAL_Q).is_zero()
        and abg.specialize(coeff.REAL_Q).is_zero(),
        "vanishes for qb=-q": aad.subst_qbar_minus_q().is_zero()
        and abg.subst_qbar_minus_q().is_zero(),
    }
    ok = True
    for label, value in checks.items():
        print(f"  {'PASS' if value else 'FAIL'} {label}")
        ok = ok and value
    return 0 if ok else 1


def _cmd_length(args) -> int:
    regime = regime_from_label(args.regime)
    if regime.kind not in (RegimeKind.UNIT_CIRCLE, RegimeKind.REAL_Q):
        print("error: length runs in unit-circle or real-q regimes", file=sys.stderr)
        return 2
    ell, reports, comparison = algebras.minkowski_length(regime)
    alg = algebras.minkowski_system(regime)
    print(f"length element ({regime.label}): {ell}")
    print(f"normal form: {alg.system.normal_form(ell)}")
    ok = True
    for r in reports:
        print(f"{r.status.upper():5s} {r.check_id}"
              + (f"  {r.detail}" if r.detail else ""))
        ok = ok and r.status != "fail"
    if comparison is not None:
        print(f"comparison scalar against alpha*delta/(2z) + delta*alpha/(2zb)"
              f" - star(gamma)*gamma: {comparison}")
    return 0 if ok else 1


def _cmd_eval(args) -> int:
    regime = regime_from_label(args.regime)
    rng = random.Random(args.seed)
    samples: list[tuple[complex, float, complex | None]] = []
    t_values = [args.t] if args.t else [0.5, 2.0]
    if args.q:
        re, im = (float(v) for v in args.q.split(","))
        q = complex(re, im)
        if regime.kind is RegimeKind.UNIT_CIRCLE and q != 0:
            q /= abs(q)  # project user input onto the circle exactly
        samples.append((q, t_values[0], None))
    while len(samples) < max(args.samples, len(samples)):
        t = t_values[len(samples) % len(t_values)]
        if regime.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
            q = 0.5 + 1.5 * rng.random()
            samples.append((complex(q), t, None))
        elif regime.kind is RegimeKind.UNIT_CIRCLE:
            theta = rng.uniform(0.08, cmath.pi - 0.08)
            if abs(theta - cmath.pi / 2) < 0.1:
                continue
            samples.append((cmath.exp(1j * theta), t, None))
        else:
            q = cmath.exp(1j * rng.uniform(0.1, 3.0)) * (0.5 + rng.random())
            qb = cmath.exp(1j * rng.uniform(0.1, 3.0)) * (0.5 + rng.random())
            samples.append((q, t, qb))
    worst: dict[str, float] = {}
    for q, t, qb in samples:
        res = intertwiners.numeric_suite(regime, q, t, qb)
        for k, v in res.items():
            worst[k] = max(worst.get(k, 0.0), v)
    ok = True
    for k in sorted(worst):
        status = "PASS" if worst[k] < args.tol else "FAIL"
        ok = ok and worst[k] < args.tol
        print(f"{status} {k}  max residual {worst[k]:.3e}")
    print(f"{len(samples)} samples, tolerance {args.tol:g}, "
          f"branch: principal square roots, seed {args.seed}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmink",
        description="exact symbolic checks for the q-deformed Lorentz/Minkowski "
                    "structure and its braided translation symmetry")
    sub = p.add_subparsers(dest="command", required=True)
    regimes = ["generic", "unit-circle", "real-q", "case2+", "case2-"]

    v = sub.add_parser("verify", help="run a suite of exact checks")
    v.add_argument("--regime", choices=regimes, default="generic")
    v.add_argument("--suite", choices=("all",) + SUITE_ORDER, default="all")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--json", metavar="PATH", help="also write the JSON report here")
    v.set_defaults(fn=_cmd_verify)

    r = sub.add_parser("relations", help="print the oriented relation table")
    r.add_argument("--regime", choices=regimes, default="unit-circle")
    r.add_argument("--format", choices=["text", "json"], default="text")
    r.add_argument("--pretty", action="store_true",
                   help="unicode rendering instead of the diffable ASCII")
    r.set_defaults(fn=_cmd_relations)

    n = sub.add_parser("nf", help="normal form of an expression")
    n.add_argument("--regime", choices=regimes, default="unit-circle")
    n.add_argument("--expr", required=True)
    n.add_argument("--pretty", action="store_true",
                   help="unicode rendering instead of the diffable ASCII")
    n.set_defaults(fn=_cmd_nf)

    o = sub.add_parser("obstruction",
                       help="generic ordering obstruction and its factors")
    o.set_defaults(fn=_cmd_obstruction)

    l = sub.add_parser("length", help="invariant quadratic length element")
    l.add_argument("--regime", choices=["unit-circle", "real-q"],
                   default="unit-circle")
    l.set_defaults(fn=_cmd_length)

    e = sub.add_parser("eval", help="numeric spot check of the identity suites")
    e.add_argument("--regime", choices=regimes, default="unit-circle")
    e.add_argument("--q", help="RE,IM of a sample point")
    e.add_argument("--t", type=float)
    e.add_argument("--samples", type=int, default=5)
    e.add_argument("--tol", type=float, default=1e-9)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(fn=_cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
