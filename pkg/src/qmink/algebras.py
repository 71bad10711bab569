"""Concrete algebras: quantum Minkowski space per regime, the crossed
product with the symmetry generators, and the braided tensor square.

The Minkowski relation space is produced two independent ways -- from the
annihilator functionals of the deformed antisymmetrizer composed with the
inverse crossing, and from the hard-coded relation tables -- and the two
spans are compared exactly every time a system is built.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import (GENERIC, ONE, Q, QB, REAL_Q, Regime, RegimeKind,
                    Scalar, T, UNIT_CIRCLE, ZERO, GaussianRational, integer,
                    rat)
from .intertwiners import (CheckReport, _timed, classical_limit,
                           operator_source, suite_moves, suite_spectral,
                           vector_components)
from .rewrite import (Alphabet, Generator, NCPoly, RewriteRule, RewriteSystem,
                      orient)
from .tensor import (B, TMap, U, annihilator_basis, bar_conjugate, compose,
                     flip, identity, permutation, place, span_equal,
                     tensor_product)

__all__ = [
    "SpanMismatchError", "OracleUnverifiedError", "MinkowskiAlgebra",
    "x_alphabet", "minkowski_system", "pbw_obstruction_generic",
    "minkowski_length", "mz_presentation_check", "CrossedProduct",
    "build_crossed", "crossed_reduce", "crossed_star_check",
    "BraidedSquare", "build_braided_square", "braided_delta_check",
    "suite_pbw", "suite_delta", "suite_length", "suite_classical",
]

GR_ONE = GaussianRational.of(1)


class SpanMismatchError(AssertionError):
    """Derived and tabulated relation spaces differ."""


class OracleUnverifiedError(RuntimeError):
    """A scripted reduction uses a substitution whose backing check failed."""


PAIR_NAMES = ("alpha", "beta", "gamma", "delta")  # component codes 0..3

_X_GENS = {
    "alpha": Generator("alpha", "alpha"),
    "beta": Generator("beta", "gamma"),
    "gamma": Generator("gamma", "beta"),
    "delta": Generator("delta", "delta"),
}


def x_order(regime: Regime) -> tuple[str, ...]:
    """Generator ordering used for orientation in each regime."""
    if regime.kind in (RegimeKind.REAL_Q, RegimeKind.CASE2):
        return ("beta", "alpha", "delta", "gamma")
    return ("alpha", "beta", "gamma", "delta")


def x_alphabet(regime: Regime) -> Alphabet:
    return Alphabet([_X_GENS[n] for n in x_order(regime)])


# --------------------------------------------------------------------------
# Relation sources
# --------------------------------------------------------------------------

def _functional_to_relation(f: TMap, alph: Alphabet) -> NCPoly:
    """Quadratic relation <f, x x> = 0 read off a 4-leg functional."""
    p = NCPoly.zero(alph)
    for col, v in enumerate(f.entries[0]):
        if v.is_zero():
            continue
        p1 = (col >> 2) & 3
        p2 = col & 3
        p = p + NCPoly.word(alph, (PAIR_NAMES[p1], PAIR_NAMES[p2]), v)
    return p


def derived_relations(regime: Regime) -> list[NCPoly]:
    """Relations from the antisymmetrizer kernel functionals.

    Annihilator bases of the two rank-3 blocks are tensored and composed
    with the inverse crossing on legs 2, 3; evaluating the six resulting
    functionals on the quadratic monomials gives the relations.
    """
    src = operator_source(regime)
    amb = (U, B, U, B)
    xinv23 = place(src.get("X^-1"), (2, 3), amb)
    alph = x_alphabet(regime)
    rels = []
    for a, b in (("P'", "Q"), ("P", "Q'")):
        for f1 in annihilator_basis(src.get(a)):
            for f2 in annihilator_basis(src.get(b)):
                f = compose(tensor_product(f1, f2), xinv23)
                rels.append(_functional_to_relation(f, alph))
    return rels


def table_relations(regime: Regime) -> list[NCPoly]:
    """The displayed relation tables, hard coded per regime."""
    alph = x_alphabet(regime)
    qi = Q ** -1
    ti = T ** -1
    if regime.kind in (RegimeKind.GENERIC, RegimeKind.CASE2):
        eps = integer(regime.epsilon)
        return [
            _rel_words(alph, regime, [(QB, "alpha beta"),
                                      (-(QB * eps), "beta delta"),
                                      (-T, "beta alpha")]),
            _rel_words(alph, regime, [(QB * T, "gamma delta"),
                                      (-ONE, "delta gamma")]),
            _rel_words(alph, regime, [(Q * QB * T, "alpha delta"),
                                      (QB, "gamma beta"),
                                      (-(QB * eps), "delta delta"),
                                      (-Q, "beta gamma"),
                                      (-T, "delta alpha")]),
            _rel_words(alph, regime, [(Q, "gamma alpha"),
                                      (-(Q * eps), "delta gamma"),
                                      (-T, "alpha gamma")]),
            _rel_words(alph, regime, [(Q * T, "delta beta"),
                                      (-ONE, "beta delta")]),
            _rel_words(alph, regime, [(Q * QB * T, "delta alpha"),
                                      (Q, "gamma beta"),
                                      (-(Q * eps), "delta delta"),
                                      (-QB, "beta gamma"),
                                      (-T, "alpha delta")]),
        ]
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        return [
            _rel_words(alph, regime, [(ONE, "alpha beta"), (-(T * Q), "beta alpha")]),
            _rel_words(alph, regime, [(ONE, "alpha gamma"), (-(ti * Q), "gamma alpha")]),
            _rel_words(alph, regime, [(ONE, "beta delta"), (-(T * Q), "delta beta")]),
            _rel_words(alph, regime, [(ONE, "gamma delta"), (-(ti * Q), "delta gamma")]),
            _rel_words(alph, regime, [(ONE, "beta gamma"), (-ONE, "gamma beta")]),
            _rel_words(alph, regime, [(ONE, "alpha delta"), (-ONE, "delta alpha"),
                                      (-(ti * (Q - qi)), "beta gamma")]),
        ]
    # real q: alpha <-> beta, gamma <-> delta, t <-> 1/t image of the table
    return [
        _rel_words(alph, regime, [(ONE, "beta alpha"), (-(Q * ti), "alpha beta")]),
        _rel_words(alph, regime, [(ONE, "gamma alpha"), (-(qi * T), "alpha gamma")]),
        _rel_words(alph, regime, [(ONE, "delta gamma"), (-(Q * T), "gamma delta")]),
        _rel_words(alph, regime, [(ONE, "delta beta"), (-(qi * ti), "beta delta")]),
        _rel_words(alph, regime, [(ONE, "delta alpha"), (-ONE, "alpha delta")]),
        _rel_words(alph, regime, [(ONE, "beta gamma"), (-ONE, "gamma beta"),
                                  (-(T * (Q - qi)), "alpha delta")]),
    ]


def _rel_words(alph: Alphabet, regime: Regime, terms) -> NCPoly:
    p = NCPoly.zero(alph)
    for c, words in terms:
        p = p + NCPoly.word(alph, words.split(), c.specialize(regime))
    return p


_WORD_BASIS = [(i, j) for i in range(4) for j in range(4)]


def _relation_rows(rels: list[NCPoly]) -> list[list[Scalar]]:
    return [[p.terms.get(w, ZERO) for w in _WORD_BASIS] for p in rels]


@dataclass
class MinkowskiAlgebra:
    """Quadratic x-algebra for one regime: relations plus oriented rules."""

    regime: Regime
    source: str
    relations: list[NCPoly]
    system: RewriteSystem


_MINK_CACHE: dict[tuple, MinkowskiAlgebra] = {}


def minkowski_system(regime: Regime, source: str = "derived") -> MinkowskiAlgebra:
    """Build the Minkowski algebra; always cross-checks the two sources."""
    key = (regime, source)
    hit = _MINK_CACHE.get(key)
    if hit is not None:
        return hit
    derived = derived_relations(regime)
    table = table_relations(regime)
    if not span_equal(_relation_rows(derived), _relation_rows(table)):
        raise SpanMismatchError(
            f"derived and tabulated relation spaces differ in {regime.label}")
    rels = derived if source == "derived" else table
    alg = MinkowskiAlgebra(regime, source, rels,
                           orient(rels, x_alphabet(regime), regime))
    _MINK_CACHE[key] = alg
    return alg


# --------------------------------------------------------------------------
# PBW obstruction in the generic regime
# --------------------------------------------------------------------------

def pbw_obstruction_generic() -> tuple[Scalar, Scalar, NCPoly]:
    """Coefficient gap between the two orderings of q(qb^2+1) gamma beta alpha.

    Path A rewrites the trailing beta*alpha pair first; path B is the
    plain leftmost-first normal form (which starts with gamma*beta).  The
    difference is supported on the two independent ordered words
    alpha*alpha*delta and alpha*beta*gamma; the coefficients at those
    words are returned, scaled by q(qb^2+1) as in the standard gap
    normalization.
    """
    alg = minkowski_system(GENERIC)
    sys = alg.system
    alph = sys.alphabet
    g, b, a = alph.index("gamma"), alph.index("beta"), alph.index("alpha")
    word = (g, b, a)
    path_a = sys.normal_form(sys.apply_rule_at(word, 1))
    path_b = sys.normal_form(NCPoly(alph, {word: ONE}))
    diff = (path_a - path_b).scale(Q * (QB ** 2 + ONE))
    aad = tuple(alph.index(n) for n in ("alpha", "alpha", "delta"))
    abg = tuple(alph.index(n) for n in ("alpha", "beta", "gamma"))
    extra = set(diff.terms) - {aad, abg}
    if extra:
        raise AssertionError(f"obstruction supported outside expected words: {extra}")
    return diff.terms.get(aad, ZERO), diff.terms.get(abg, ZERO), diff


# --------------------------------------------------------------------------
# Minkowski length
# --------------------------------------------------------------------------

def minkowski_length_poly(regime: Regime) -> NCPoly:
    """Contraction of x x with the invariant metric functional."""
    src = operator_source(regime)
    amb = (U, B, U, B)
    xinv23 = place(src.get("X^-1"), (2, 3), amb)
    eprime = src.get("E'")
    tau_ebar_prime = compose(bar_conjugate(eprime, regime), flip(B, B))
    mid = place(tau_ebar_prime, (3, 4), xinv23.out_sig, ())
    phi = compose(place(eprime, (1, 2), mid.out_sig, ()), mid)
    functional = compose(phi, xinv23)
    return _functional_to_relation(functional, x_alphabet(regime))


def minkowski_length(regime: Regime):
    """Length element, centrality/star reports, and the comparison scalar.

    Returns (poly, reports, comparison_scalar); the scalar relates the
    contraction to alpha*delta/(2z) + delta*alpha/(2 zbar) - gamma* gamma
    with z = q/t, and is only computed on the unit circle.
    """
    alg = minkowski_system(regime)
    sys = alg.system
    ell = minkowski_length_poly(regime)
    reports = []

    def central():
        bad = []
        for name in PAIR_NAMES:
            gpoly = NCPoly.word(sys.alphabet, (name,))
            resid = sys.normal_form(ell * gpoly - gpoly * ell)
            if not resid.is_zero():
                bad.append(f"[l, {name}] -> {resid}")
        return not bad, "; ".join(bad) or None, None
    reports.append(_timed("length/centrality", regime, "expect-zero", central))

    def star_fixed():
        resid = sys.normal_form(ell.star(regime) - ell)
        z = resid.is_zero()
        return z, None if z else str(resid), None
    reports.append(_timed("length/star-fixed", regime, "expect-zero", star_fixed))

    comparison = None
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        alph = sys.alphabet
        half = rat(1, 2)
        inv_2z = half * T * Q ** -1           # 1/(2z), z = q/t
        inv_2zbar = half * T * Q              # 1/(2 zbar), zbar = 1/(qt)
        formula = (NCPoly.word(alph, ("alpha", "delta"), inv_2z)
                   + NCPoly.word(alph, ("delta", "alpha"), inv_2zbar)
                   - NCPoly.word(alph, ("beta", "gamma")))
        nf_l = sys.normal_form(ell)
        nf_f = sys.normal_form(formula)
        ratios = []
        for w in set(nf_l.terms) | set(nf_f.terms):
            cl = nf_l.terms.get(w, ZERO)
            cf = nf_f.terms.get(w, ZERO)
            if cf.is_zero():
                ratios = None
                break
            ratios.append(cl / cf)
        ok = ratios is not None and all(r == ratios[0] for r in ratios)
        if ok:
            comparison = ratios[0]
        reports.append(CheckReport(
            "length/quadratic-form-comparison", regime.label,
            "pass" if ok else "fail", "info",
            None if ok else "not proportional",
            detail=f"contraction = ({comparison}) * displayed form"
            if ok else None))
    return ell, reports, comparison


def mz_presentation_check() -> CheckReport:
    """The one-parameter z = q/t presentation spans the same relations."""
    regime = UNIT_CIRCLE

    def body():
        alph = x_alphabet(regime)
        z = Q * T ** -1
        zbar = z.star(regime)
        r1 = _rel_words(alph, regime, [(ONE, "alpha gamma"), (-z, "gamma alpha")])
        r2 = _rel_words(alph, regime, [(ONE, "gamma delta"), (-z, "delta gamma")])
        r3 = _rel_words(alph, regime, [(ONE, "alpha delta"), (-ONE, "delta alpha"),
                                       (-(z - zbar), "beta gamma")])
        normal = _rel_words(alph, regime, [(ONE, "beta gamma"),
                                           (-ONE, "gamma beta")])
        mz = [r1, r2, r3, r1.star(regime), r2.star(regime), normal]
        table = table_relations(regime)
        ok = span_equal(_relation_rows(mz), _relation_rows(table))
        return ok, None if ok else "spans differ", \
            "three z-relations plus their stars and gamma* gamma = gamma gamma*"
    return _timed("length/mz-presentation", regime, "expect-zero", body)


# --------------------------------------------------------------------------
# Crossed product with the symmetry generators
# --------------------------------------------------------------------------

def _crossed_generators(regime: Regime, primes: bool, hs: bool) -> list[Generator]:
    gens = []
    for a in (1, 2):
        for bb in (1, 2):
            gens.append(Generator(f"u[{a},{bb}]", f"ub[{a},{bb}]"))
    for a in (1, 2):
        for bb in (1, 2):
            gens.append(Generator(f"ub[{a},{bb}]", f"u[{a},{bb}]"))
    if hs:
        swap = (0, 2, 1, 3)
        for r in range(4):
            for c in range(4):
                gens.append(Generator(f"h[{r},{c}]", f"h[{swap[r]},{swap[c]}]"))
    for n in x_order(regime):
        gens.append(_X_GENS[n])
    if primes:
        for n in x_order(regime):
            g = _X_GENS[n]
            gens.append(Generator(g.name + "'", g.star + "'"))
    return gens


@dataclass
class CrossedProduct:
    """Mixed algebra: free symmetry generators, x-generators, cross rules."""

    regime: Regime
    variant: str
    alphabet: Alphabet
    system: RewriteSystem


def _cross_rules_for(alph: Alphabet, regime: Regime, variant: str) -> list[RewriteRule]:
    src = operator_source(regime)
    tmat = src.get(f"T:{variant}")
    tpmat = src.get(f"T':{variant}")
    rules = []
    for code in range(4):
        a_bit, b_bit = (code >> 1) & 1, code & 1
        xg = alph.index(PAIR_NAMES[code])
        for cc in (0, 1):
            for dd in (0, 1):
                row = (a_bit << 2) | (b_bit << 1) | cc
                # x u -> T u x
                rhs = NCPoly.zero(alph)
                for col in range(8):
                    v = tmat.entries[row][col]
                    if v.is_zero():
                        continue
                    ee, kk, ll = (col >> 2) & 1, (col >> 1) & 1, col & 1
                    rhs = rhs + NCPoly.word(
                        alph, (f"u[{ee + 1},{dd + 1}]", PAIR_NAMES[(kk << 1) | ll]), v)
                rules.append(RewriteRule((xg, alph.index(f"u[{cc + 1},{dd + 1}]")), rhs))
                # x ub -> T' ub x
                rhs = NCPoly.zero(alph)
                for col in range(8):
                    v = tpmat.entries[row][col]
                    if v.is_zero():
                        continue
                    ee, kk, ll = (col >> 2) & 1, (col >> 1) & 1, col & 1
                    rhs = rhs + NCPoly.word(
                        alph, (f"ub[{ee + 1},{dd + 1}]", PAIR_NAMES[(kk << 1) | ll]), v)
                rules.append(RewriteRule((xg, alph.index(f"ub[{cc + 1},{dd + 1}]")), rhs))
    return rules


def _mapped_x_rules(alph: Alphabet, regime: Regime, prime: str = "",
                    coeff_map=None) -> list[RewriteRule]:
    mink = minkowski_system(regime)
    fix = coeff_map or (lambda s: s)
    out = []
    for lhs, rhs in mink.system.rules.items():
        lhs2 = tuple(alph.index(mink.system.alphabet.name(k) + prime) for k in lhs)
        terms = {}
        for w, c in rhs.terms.items():
            c2 = fix(c)
            if not c2.is_zero():
                terms[tuple(alph.index(mink.system.alphabet.name(k) + prime)
                            for k in w)] = c2
        out.append(RewriteRule(lhs2, NCPoly(alph, terms)))
    return out


def _w_rules(alph: Alphabet, what: TMap) -> list[RewriteRule]:
    """x h -> W h x: the matrix rule moving an h-symbol left past x."""
    rules = []
    for j in range(4):
        xg = alph.index(PAIR_NAMES[j])
        for k in range(4):
            row = (j << 2) | k
            for ll in range(4):
                rhs = NCPoly.zero(alph)
                for col in range(16):
                    v = what.entries[row][col]
                    if v.is_zero():
                        continue
                    aa, bb = (col >> 2) & 3, col & 3
                    rhs = rhs + NCPoly.word(
                        alph, (f"h[{aa},{ll}]", PAIR_NAMES[bb]), v)
                rules.append(RewriteRule((xg, alph.index(f"h[{k},{ll}]")), rhs))
    return rules


def _xprime_h_rules(alph: Alphabet) -> list[RewriteRule]:
    rules = []
    for i in PAIR_NAMES:
        xpg = alph.index(i + "'")
        for k in range(4):
            for ll in range(4):
                name = f"h[{k},{ll}]"
                rules.append(RewriteRule(
                    (xpg, alph.index(name)), NCPoly.word(alph, (name, i + "'"))))
    return rules


def _braid_rules(alph: Alphabet, sigma: Scalar) -> list[RewriteRule]:
    rules = []
    for i in PAIR_NAMES:
        for j in PAIR_NAMES:
            rules.append(RewriteRule(
                (alph.index(i + "'"), alph.index(j)),
                NCPoly.word(alph, (j, i + "'"), sigma)))
    return rules


def _xprime_u_rules(alph: Alphabet) -> list[RewriteRule]:
    rules = []
    for i in PAIR_NAMES:
        xpg = alph.index(i + "'")
        for stem in ("u", "ub"):
            for a in (1, 2):
                for b in (1, 2):
                    name = f"{stem}[{a},{b}]"
                    rules.append(RewriteRule(
                        (xpg, alph.index(name)),
                        NCPoly.word(alph, (name, i + "'"))))
    return rules


def full_system(regime: Regime) -> tuple[Alphabet, RewriteSystem]:
    """Combined system for normal-form queries over u, ub, h, x (and x').

    The symmetry letters are free among themselves (no normal form for
    their own algebra is attempted); mixed words reduce until every x
    letter sits to the right of every u/ub/h letter.  Primed copies and
    the braiding only exist on the unit circle; h-rules need the
    translation commutation matrix, so the generic regime exposes only
    u, ub and x.
    """
    primes = regime.kind is RegimeKind.UNIT_CIRCLE
    hs = regime.kind is not RegimeKind.GENERIC
    alph = Alphabet(_crossed_generators(regime, primes=primes, hs=hs))
    rules = _mapped_x_rules(alph, regime) + _cross_rules_for(alph, regime, "first")
    if hs:
        rules += _w_rules(alph, operator_source(regime).get("What"))
    if primes:
        rules += _mapped_x_rules(alph, regime, "'")
        rules += _braid_rules(alph, (Q ** -1).specialize(regime))
        rules += _xprime_h_rules(alph)
        rules += _xprime_u_rules(alph)
    return alph, RewriteSystem(alph, rules, regime)


def build_crossed(regime: Regime, variant: str = "first") -> CrossedProduct:
    alph = Alphabet(_crossed_generators(regime, primes=False, hs=False))
    rules = _mapped_x_rules(alph, regime) + _cross_rules_for(alph, regime, variant)
    return CrossedProduct(regime, variant, alph,
                          RewriteSystem(alph, rules, regime))


def crossed_reduce(cp: CrossedProduct, names, coeff: Scalar = ONE) -> NCPoly:
    """Normal form of a word over {x, u, ub}: symmetry letters move left."""
    return cp.system.normal_form(NCPoly.word(cp.alphabet, names, coeff))


def crossed_star_check(regime: Regime, variant: str = "first") -> CheckReport:
    """Involutivity of the star-flip on generator pairs, at matrix level."""
    from .intertwiners import suite_crossed  # local import to reuse the check
    for rep in suite_crossed(regime):
        if rep.check_id == f"crossed/star-involution:{variant}":
            return rep
    raise KeyError("star involution check missing from crossed suite")


# --------------------------------------------------------------------------
# Braided square and the coproduct compatibility script
# --------------------------------------------------------------------------

@dataclass
class BraidedSquare:
    """Two x-copies, free first-copy h-symbols, and the braiding scalar."""

    regime: Regime
    sigma: Scalar
    alphabet: Alphabet
    system: RewriteSystem
    what: TMap
    pminus: TMap


def build_braided_square(regime: Regime = UNIT_CIRCLE,
                         sigma: Scalar | None = None,
                         classical: bool = False) -> BraidedSquare:
    if regime.kind is not RegimeKind.UNIT_CIRCLE:
        raise SpanMismatchError("the braided square is a unit-circle structure")
    src = operator_source(regime)
    what = src.get("What")
    pminus = src.get("Pminus")
    if classical:
        what = classical_limit(what)
        pminus = classical_limit(pminus)
        sigma = ONE if sigma is None else sigma
    if sigma is None:
        sigma = (Q ** -1).specialize(regime)

    def fix(s: Scalar) -> Scalar:
        return s.subst_half(GR_ONE, GR_ONE, GR_ONE) if classical else s

    # alphabet: h[0..3,0..3], then x, then x'
    alph = Alphabet(_crossed_generators(regime, primes=True, hs=True)[8:])
    rules = (_mapped_x_rules(alph, regime, "", fix if classical else None)
             + _mapped_x_rules(alph, regime, "'", fix if classical else None)
             + _braid_rules(alph, sigma)
             + _w_rules(alph, what)
             + _xprime_h_rules(alph))
    return BraidedSquare(regime, sigma, alph,
                         RewriteSystem(alph, rules, regime), what, pminus)


def braided_delta_check(regime: Regime = UNIT_CIRCLE,
                        sigma: Scalar | None = None,
                        classical: bool = False,
                        prereq: list[CheckReport] | None = None):
    """Scripted reduction of antisymmetrizer . (coproduct x)^2 to zero.

    The expansion (x + h x')(x + h x') is contracted with the deformed
    antisymmetrizer and reduced by the braided-square rules; the single
    quadratic-h block is then exchanged using the certified intertwining
    substitution (antisymmetrizer past h h), whose backing checks must
    have passed.  Returns (residuals by component, steps log, square).
    """
    if prereq is None:
        prereq = suite_moves(regime) + suite_spectral(regime)
    failures = [r.check_id for r in prereq if r.status == "fail"]
    if failures:
        raise OracleUnverifiedError(
            f"backing intertwiner checks failed: {failures}")
    sq = build_braided_square(regime, sigma, classical)
    alph = sq.alphabet
    sys = sq.system
    pm = sq.pminus
    steps = [
        "expand (x + h x')_1 (x + h x')_2 into four blocks",
        "contract with the deformed antisymmetrizer",
        "reduce: move h left, braid x' past x, apply both copies' relations",
        "exchange antisymmetrizer with h h (certified intertwining substitution)",
        "reduce the remaining primed/unprimed blocks to normal form",
    ]

    residuals: dict[tuple[int, int], NCPoly] = {}
    for m in range(4):
        for n in range(4):
            total = NCPoly.zero(alph)
            correction = NCPoly.zero(alph)
            row = (m << 2) | n
            for j in range(4):
                for k in range(4):
                    c = pm.entries[row][(j << 2) | k]
                    if c.is_zero():
                        continue
                    xj, xk = PAIR_NAMES[j], PAIR_NAMES[k]
                    term = NCPoly.word(alph, (xj, xk), c)
                    for a in range(4):
                        for b in range(4):
                            term = term + NCPoly.word(
                                alph, (f"h[{j},{a}]", PAIR_NAMES[a] + "'",
                                       f"h[{k},{b}]", PAIR_NAMES[b] + "'"), c)
                    for cc in range(4):
                        term = term + NCPoly.word(
                            alph, (xj, f"h[{k},{cc}]", PAIR_NAMES[cc] + "'"), c)
                        term = term + NCPoly.word(
                            alph, (f"h[{j},{cc}]", PAIR_NAMES[cc] + "'", xk), c)
                    total = total + term
                    # certified exchange: subtract P.hh, add hh.P
                    for a in range(4):
                        for b in range(4):
                            correction = correction - NCPoly.word(
                                alph, (f"h[{j},{a}]", f"h[{k},{b}]",
                                       PAIR_NAMES[a] + "'", PAIR_NAMES[b] + "'"), c)
            for jp in range(4):
                for kp in range(4):
                    for a in range(4):
                        for b in range(4):
                            c2 = pm.entries[(jp << 2) | kp][(a << 2) | b]
                            if c2.is_zero():
                                continue
                            correction = correction + NCPoly.word(
                                alph, (f"h[{m},{jp}]", f"h[{n},{kp}]",
                                       PAIR_NAMES[a] + "'", PAIR_NAMES[b] + "'"), c2)
            residuals[(m, n)] = sys.normal_form(sys.normal_form(total) + correction)
    return residuals, steps, sq


def suite_delta(regime: Regime) -> list[CheckReport]:
    if regime.kind is not RegimeKind.UNIT_CIRCLE:
        return [CheckReport("delta/skip", regime.label, "skip", "info",
                            detail="the braided coproduct check runs on the unit circle")]
    reports = []
    prereq = suite_moves(regime) + suite_spectral(regime)

    def good():
        residuals, steps, _ = braided_delta_check(regime, prereq=prereq)
        bad = {k: v for k, v in residuals.items() if not v.is_zero()}
        return not bad, f"{len(bad)} nonzero components" if bad else None, \
            "; ".join(steps)
    reports.append(_timed("delta/braided-coproduct", regime, "expect-zero", good))

    def sigma_one():
        residuals, _, sq = braided_delta_check(regime, sigma=ONE, prereq=prereq)
        nonzero = {k: v for k, v in residuals.items() if not v.is_zero()}
        if not nonzero:
            return False, "no residual", None
        # cross-check: leftover coefficients match the matrix obstruction
        src = operator_source(regime)
        obstruction = compose(sq.pminus, sq.what + identity((U, B, U, B)))
        for (m, n), poly in nonzero.items():
            row = (m << 2) | n
            for w, c in poly.terms.items():
                names = [sq.alphabet.name(k) for k in w]
                if len(names) != 3 or not names[0].startswith("h["):
                    return False, f"unexpected residual word {names}", None
                aa, cc = (int(x) for x in names[0][2:-1].split(","))
                bb = PAIR_NAMES.index(names[1])
                if names[2] != PAIR_NAMES[cc] + "'":
                    return False, f"unexpected residual word {names}", None
                want = obstruction.entries[row][(aa << 2) | bb]
                if c != want:
                    return False, "residual does not match the matrix obstruction", None
        return True, f"{len(nonzero)} nonzero components", \
            "residual coefficients equal the entries of the matrix obstruction"
    reports.append(_timed("delta/sigma-one-fails", regime, "expect-nonzero", sigma_one))

    def classical():
        residuals, _, _ = braided_delta_check(regime, sigma=ONE, classical=True,
                                              prereq=prereq)
        bad = {k: v for k, v in residuals.items() if not v.is_zero()}
        return not bad, f"{len(bad)} nonzero components" if bad else None, \
            "plain tensor square at q = t = 1"
    reports.append(_timed("delta/classical-sigma-one", regime, "expect-zero",
                          classical))

    def braid_consistency():
        sq = build_braided_square(regime)
        xs = {sq.alphabet.index(n) for n in PAIR_NAMES}
        xs |= {sq.alphabet.index(n + "'") for n in PAIR_NAMES}
        sub_rules = [RewriteRule(lhs, rhs) for lhs, rhs in sq.system.rules.items()
                     if set(lhs) <= xs and all(set(w) <= xs for w in rhs.terms)]
        # rebuild over the x/x' alphabet only
        alph2 = Alphabet(_crossed_generators(regime, primes=True, hs=False)[8:])
        remap = {sq.alphabet.index(g.name): alph2.index(g.name) for g in alph2.gens}
        rules2 = [RewriteRule(tuple(remap[k] for k in r.lhs),
                              NCPoly(alph2, {tuple(remap[k] for k in w): c
                                             for w, c in r.rhs.terms.items()}))
                  for r in sub_rules]
        obstructions = RewriteSystem(alph2, rules2, regime).check_confluence()
        return not obstructions, f"{len(obstructions)} overlaps fail" \
            if obstructions else None, "x/x' rule set is locally confluent"
    reports.append(_timed("delta/braiding-consistency", regime, "expect-zero",
                          braid_consistency))
    return reports


def suite_length(regime: Regime) -> list[CheckReport]:
    if regime.kind not in (RegimeKind.UNIT_CIRCLE, RegimeKind.REAL_Q):
        return [CheckReport("length/skip", regime.label, "skip", "info",
                            detail="length checks run on unit-circle and real-q")]
    _, reports, _ = minkowski_length(regime)
    if regime.kind is RegimeKind.UNIT_CIRCLE:
        reports.append(mz_presentation_check())

        def classical():
            alg = minkowski_system(regime)
            ell = minkowski_length_poly(regime)
            cl = NCPoly(alg.system.alphabet,
                        {w: c.subst_half(GR_ONE, GR_ONE, GR_ONE)
                         for w, c in ell.terms.items()})
            alph = alg.system.alphabet
            want = (NCPoly.word(alph, ("alpha", "delta"), integer(-2))
                    + NCPoly.word(alph, ("beta", "gamma"), integer(2)))
            # compare modulo the classical (commutative) relations
            csys = _classical_system(regime)
            resid = csys.normal_form(cl - want)
            z = resid.is_zero()
            return z, None if z else str(resid), \
                "q = t = 1 length is -2 (alpha delta - beta gamma)"
        reports.append(_timed("length/classical-quadratic-form", regime,
                              "expect-zero", classical))
    return reports


def _classical_system(regime: Regime) -> RewriteSystem:
    alg = minkowski_system(regime)
    alph = alg.system.alphabet
    rels = [NCPoly(alph, {w: c.subst_half(GR_ONE, GR_ONE, GR_ONE)
                          for w, c in p.terms.items()}) for p in alg.relations]
    return orient(rels, alph, regime)


def suite_pbw(regime: Regime) -> list[CheckReport]:
    reports = []

    def integrity():
        try:
            minkowski_system(regime)
        except SpanMismatchError as exc:
            return False, str(exc), None
        return True, None, "derived and tabulated relation spans agree"
    reports.append(_timed("pbw/relation-integrity", regime, "expect-zero",
                          integrity))

    def annihilator_span():
        # the antisymmetrizer's own row space spans the same functionals
        # as the block-by-block route through the inverse crossing
        src = operator_source(regime)
        amb = (U, B, U, B)
        xinv23 = place(src.get("X^-1"), (2, 3), amb)
        direct = [f.entries[0] for f in annihilator_basis(src.get("Pminus"))]
        blocks = []
        for a, b in (("P'", "Q"), ("P", "Q'")):
            for f1 in annihilator_basis(src.get(a)):
                for f2 in annihilator_basis(src.get(b)):
                    blocks.append(compose(tensor_product(f1, f2), xinv23)
                                  .entries[0])
        ok = len(direct) == 6 and span_equal(direct, blocks)
        return ok, None if ok else "spans differ", None
    reports.append(_timed("pbw/antisymmetrizer-annihilator-span", regime,
                          "expect-zero", annihilator_span))

    if regime.kind is RegimeKind.GENERIC:
        def obstruction():
            aad, abg, _ = pbw_obstruction_generic()
            if aad.is_zero() or abg.is_zero():
                return False, "obstruction unexpectedly vanishes", None
            f1 = ONE - (Q * QB) ** 2
            f2 = QB ** 2 - Q ** 2
            ok = (aad.numerator_divisible_by(f1) and aad.numerator_divisible_by(f2)
                  and abg.numerator_divisible_by(f1) and abg.numerator_divisible_by(f2))
            specs = [aad.specialize(UNIT_CIRCLE), aad.specialize(REAL_Q),
                     aad.subst_qbar_minus_q(),
                     abg.specialize(UNIT_CIRCLE), abg.specialize(REAL_Q),
                     abg.subst_qbar_minus_q()]
            ok = ok and all(s.is_zero() for s in specs)
            return ok, None if ok else "factorization or specialization failed", \
                "nonzero; factors through (1-(q qb)^2)(qb^2-q^2); vanishes on " \
                "|q|=1, real q, and qb=-q"
        reports.append(_timed("pbw/ordering-obstruction", regime,
                              "expect-nonzero", obstruction))

        def overlap():
            sys = minkowski_system(regime).system
            obstructions = sys.check_confluence()
            gba = tuple(sys.alphabet.index(n) for n in ("gamma", "beta", "alpha"))
            hit = [o for o in obstructions if o.word == gba]
            if not hit:
                return False, "gamma beta alpha overlap resolves", None
            support = {tuple(sys.alphabet.name(k) for k in w)
                       for w in hit[0].diff.terms}
            want = {("alpha", "alpha", "delta"), ("alpha", "beta", "gamma")}
            ok = support == want
            return ok, None if ok else f"support {support}", \
                "generic overlap fails exactly on the two ordered cubic words"
        reports.append(_timed("pbw/generic-overlap-nonconfluent", regime,
                              "expect-nonzero", overlap))
    else:
        def confluent():
            sys = minkowski_system(regime).system
            obstructions = sys.check_confluence()
            return not obstructions, \
                f"{len(obstructions)} overlaps fail" if obstructions else None, \
                f"ordering {' < '.join(x_order(regime))}"
        reports.append(_timed("pbw/confluence", regime, "expect-zero", confluent))

        def counts():
            sys = minkowski_system(regime).system
            got = [sys.count_normal_words(d) for d in range(5)]
            want = [1, 4, 10, 20, 35]
            ok = got == want
            return ok, None if ok else f"counts {got}", \
                "ordered monomial counts match the classical size"
        reports.append(_timed("pbw/normal-word-counts", regime, "expect-zero",
                              counts))

        def star_closed():
            sys = minkowski_system(regime).system
            ok = sys.is_star_closed()
            return ok, None if ok else "star of a relation does not reduce to zero", None
        reports.append(_timed("pbw/star-closed", regime, "expect-zero", star_closed))

        def rhat_equiv():
            src = operator_source(regime)
            name = "Rhat+" if regime.kind is RegimeKind.UNIT_CIRCLE else "Rhat-"
            fixed = identity((U, B, U, B)) - src.get(name)
            ok = span_equal(fixed.entries, src.get("Pminus").entries)
            return ok, None if ok else "row spans differ", \
                f"x x relations match the fixed-point condition of {name}"
        reports.append(_timed("pbw/rhat-fixedpoint-span", regime, "expect-zero",
                              rhat_equiv))
    return reports


def suite_classical(regime: Regime = GENERIC) -> list[CheckReport]:
    """q = t = 1 degeneration: flips, antisymmetrizers, commutativity."""
    if regime.kind is not RegimeKind.GENERIC:
        return [CheckReport("classical/skip", regime.label, "skip", "info",
                            detail="classical limit is taken from the generic build")]
    src = operator_source(regime)
    reports = []

    def operators():
        bad = []
        fl = flip(U, U)
        if not classical_limit(src.get("M")).equals(fl):
            bad.append("M")
        if not classical_limit(src.get("K")).equals(flip(B, B)):
            bad.append("K")
        if not classical_limit(src.get("X")).equals(flip(U, B)):
            bad.append("X")
        tau_bold = permutation((U, B, U, B), (3, 4, 1, 2))
        for name in ("Rhat+", "Rhat-"):
            if not classical_limit(src.get(name)).equals(tau_bold):
                bad.append(name)
        half = rat(1, 2)
        anti2 = (identity((U, U)) - flip(U, U)).scale(half)
        if not classical_limit(src.get("P")).equals(anti2):
            bad.append("P")
        anti_bold = (identity((U, B, U, B)) - tau_bold).scale(half)
        if not classical_limit(src.get("Pminus")).equals(anti_bold):
            bad.append("Pminus")
        vec = vector_components(classical_limit(src.get("Pminus")))
        if not vec.equals(anti_bold):
            bad.append("Pminus(vector)")
        return not bad, ", ".join(bad) or None, \
            "deformed maps collapse to flips and classical antisymmetrizers"
    reports.append(_timed("classical/operators", regime, "expect-zero", operators))

    def commutative():
        csys = _classical_system(UNIT_CIRCLE)
        alph = csys.alphabet
        bad = []
        for a in PAIR_NAMES:
            for b in PAIR_NAMES:
                pa, pb = NCPoly.word(alph, (a,)), NCPoly.word(alph, (b,))
                if not csys.normal_form(pa * pb - pb * pa).is_zero():
                    bad.append(f"[{a},{b}]")
        return not bad, ", ".join(bad) or None, "x-algebra commutes at q = t = 1"
    reports.append(_timed("classical/minkowski-commutative", regime,
                          "expect-zero", commutative))

    def crossed_classical():
        cp = build_crossed(UNIT_CIRCLE, "first")
        alph = cp.alphabet
        sysc = RewriteSystem(
            alph,
            [RewriteRule(lhs, NCPoly(alph, {w: c.subst_half(GR_ONE, GR_ONE, GR_ONE)
                                            for w, c in rhs.terms.items()}))
             for lhs, rhs in cp.system.rules.items()],
            UNIT_CIRCLE)
        bad = []
        for xname in PAIR_NAMES:
            for uname in ("u[1,1]", "u[1,2]", "u[2,1]", "u[2,2]",
                          "ub[1,1]", "ub[2,2]"):
                w = NCPoly.word(alph, (xname, uname))
                wr = NCPoly.word(alph, (uname, xname))
                if not sysc.normal_form(w - wr).is_zero():
                    bad.append(f"[{xname},{uname}]")
        return not bad, ", ".join(bad[:4]) or None, \
            "cross relations become plain commutation at q = t = 1"
    reports.append(_timed("classical/crossed-commutative", regime,
                          "expect-zero", crossed_classical))

    def braided_classical():
        sq = build_braided_square(UNIT_CIRCLE, sigma=ONE, classical=True)
        alph = sq.alphabet
        bad = []
        for a in PAIR_NAMES:
            for b in PAIR_NAMES:
                w = NCPoly.word(alph, (a + "'", b))
                wr = NCPoly.word(alph, (b, a + "'"))
                if not sq.system.normal_form(w - wr).is_zero():
                    bad.append(f"[{a}',{b}]")
            w = NCPoly.word(alph, (a, "h[1,2]"))
            wr = NCPoly.word(alph, ("h[1,2]", a))
            if not sq.system.normal_form(w - wr).is_zero():
                bad.append(f"[{a},h]")
        return not bad, ", ".join(bad[:4]) or None, \
            "braided square collapses to the plain square at q = t = 1"
    reports.append(_timed("classical/braided-commutative", regime,
                          "expect-zero", braided_classical))

    def corner_survives():
        # recorded, not resolved: with a corner term the crossing does not
        # degenerate to the flip at q = t = 1, so the classical statement
        # is taken at epsilon = 0
        from .coeff import CASE2_PLUS
        x_cl = classical_limit(operator_source(CASE2_PLUS).get("X"))
        resid = x_cl - flip(U, B)
        return (not resid.is_zero_map()), None, \
            "epsilon corner survives the q = t = 1 limit in the second case"
    reports.append(_timed("classical/corner-term-survives", regime,
                          "expect-nonzero", corner_survives))
    return reports
