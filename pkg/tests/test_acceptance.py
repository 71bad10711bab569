"""Acceptance gate: the exit criteria of the engine, one test per item.

Every numbered requirement is exercised at its stated tolerance (exact
equality for the symbolic checks, 1e-9 max-norm for the numeric mirror)
and prints a single verdict line.
"""

import cmath
import random
import time

from qmink.algebras import (braided_delta_check, minkowski_length,
                            minkowski_system, pbw_obstruction_generic,
                            suite_classical, suite_delta, suite_length,
                            suite_pbw)
from qmink.cli import run_suites
from qmink.coeff import (CASE2_MINUS, CASE2_PLUS, GENERIC, ONE, Q, QB, REAL_Q,
                         T, UNIT_CIRCLE, integer)
from qmink.intertwiners import (numeric_suite, operator_source, suite_braid,
                                suite_compat, suite_crossed, suite_moves,
                                suite_spectral)
from qmink.tensor import compose

ALL_REGIMES = (GENERIC, UNIT_CIRCLE, REAL_Q, CASE2_PLUS, CASE2_MINUS)


def _verdict(name, ok):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, name


def test_elementary_moves_exact_in_generic():
    reports = suite_moves(GENERIC)
    positive = [r for r in reports if r.mode == "expect-zero"]
    ok = len(positive) == 9 and all(r.status == "pass" for r in reports)
    elapsed = sum(r.elapsed_ms for r in reports)
    ok = ok and elapsed < 1000.0
    _verdict(f"elementary-moves (both conjugate signs, {elapsed:.0f} ms)", ok)


def test_braid_equation_for_all_four_intertwiners():
    t0 = time.perf_counter()
    reports = suite_braid(GENERIC)
    elapsed = time.perf_counter() - t0
    wanted = {"braid/Rhat+", "braid/Rhat-", "braid/Rhat+^-1", "braid/Rhat-^-1"}
    ids = {r.check_id for r in reports if r.status == "pass"}
    ok = wanted <= ids and all(r.status == "pass" for r in reports)
    ok = ok and elapsed < 10.0
    _verdict(f"braid-equation (64x64 exact, {elapsed:.2f} s)", ok)


def test_spectral_suite():
    ok = all(r.status == "pass" for r in suite_spectral(GENERIC))
    for regime in (UNIT_CIRCLE, REAL_Q):
        by_id = {r.check_id: r.status for r in suite_spectral(regime)}
        ok = ok and by_id["spectral/display-+"] == "pass"
        ok = ok and by_id["spectral/display--"] == "pass"
        ok = ok and by_id["spectral/pminus-idempotent"] == "pass"
        ok = ok and by_id["spectral/projector-ranks"] == "pass"
    uc = {r.check_id: r.status for r in suite_spectral(UNIT_CIRCLE)}
    ok = ok and uc["spectral/w-spectral-sum"] == "pass"
    ok = ok and uc["spectral/w-on-pminus"] == "pass"
    pm = operator_source(GENERIC).get("Pminus")
    ok = ok and compose(pm, pm).equals(pm) and pm.trace() == integer(6)
    _verdict("spectral-decompositions (trace 6, eigenvalues q, q^-3, -1/q)", ok)


def test_selection_rule_obstruction():
    aad, abg, _ = pbw_obstruction_generic()
    f1 = ONE - (Q * QB) ** 2
    f2 = QB ** 2 - Q ** 2
    ok = not aad.is_zero() and not abg.is_zero()
    for s in (aad, abg):
        ok = ok and s.numerator_divisible_by(f1) and s.numerator_divisible_by(f2)
        ok = ok and s.specialize(UNIT_CIRCLE).is_zero()
        ok = ok and s.specialize(REAL_Q).is_zero()
        ok = ok and s.subst_qbar_minus_q().is_zero()
    _verdict("selection-rule (ordering obstruction and its vanishing locus)", ok)


def test_confluence_and_classical_size():
    ok = True
    for regime in (UNIT_CIRCLE, REAL_Q, CASE2_PLUS, CASE2_MINUS):
        sys = minkowski_system(regime).system
        ok = ok and sys.check_confluence() == []
        counts = [sys.count_normal_words(d) for d in range(5)]
        ok = ok and counts == [1, 4, 10, 20, 35]
    _verdict("confluence-and-counts (1, 4, 10, 20, 35)", ok)


def test_relation_integrity_every_regime():
    ok = True
    for regime in ALL_REGIMES:
        try:
            minkowski_system(regime)
        except Exception:
            ok = False
    _verdict("relation-integrity (derived span equals tabulated span)", ok)


def test_crossed_product_conditions():
    by_id = {}
    for regime in (GENERIC, UNIT_CIRCLE, REAL_Q):
        by_id[regime.label] = {r.check_id: r.status
                               for r in suite_crossed(regime)}
    g = by_id["generic"]
    ok = all(g[f"crossed/S.S.E:{v}"] == "pass" for v in ("first", "second"))
    ok = ok and all(g[f"crossed/T.T.E:{v}"] == "pass" for v in ("first", "second"))
    ok = ok and g["crossed/sse-nonsolution"] == "pass"      # expected-nonzero
    ok = ok and g["crossed/normalization-scan"] == "pass"
    ok = ok and all(g[f"crossed/X.T.T':{v}"] == "pass" for v in ("first", "second"))
    ok = ok and all(g[f"crossed/{r}.T.T:{v}"] == "pass"
                    for r in ("Rhat+", "Rhat-") for v in ("first", "second"))
    for label in ("unit-circle", "real-q"):
        ok = ok and by_id[label]["crossed/xh-matrix:first"] == "pass"
        ok = ok and by_id[label]["crossed/star-involution:first"] == "pass"
        ok = ok and by_id[label]["crossed/star-involution:second"] == "pass"
    _verdict("crossed-product (shuttle conditions, mixed-slide identities, "
             "commutation matrix, star involution)", ok)


def test_braided_compatibility():
    uc = {r.check_id: r.status for r in suite_compat(UNIT_CIRCLE)}
    ok = uc["compat/braiding-scalar-zero"] == "pass"
    ok = ok and uc["compat/sigma-one-obstructed"] == "pass"  # expected-nonzero
    delta = {r.check_id: r.status for r in suite_delta(UNIT_CIRCLE)}
    ok = ok and delta["delta/braided-coproduct"] == "pass"
    ok = ok and delta["delta/sigma-one-fails"] == "pass"     # expected-nonzero
    rq = {r.check_id: r.status for r in suite_compat(REAL_Q)}
    for label in ("one", "q", "qinv"):
        ok = ok and rq[f"compat/sigma-{label}-nonzero"] == "pass"
    ok = ok and rq["compat/sigma-one-divisibility"] == "pass"
    _verdict("braided-compatibility (sigma = 1/q works, sigma = 1 obstructed, "
             "no real-q braiding scalar)", ok)


def test_minkowski_length():
    _, reports, comparison = minkowski_length(UNIT_CIRCLE)
    by_id = {r.check_id: r.status for r in reports}
    ok = by_id["length/centrality"] == "pass"
    ok = ok and by_id["length/star-fixed"] == "pass"
    ok = ok and by_id["length/quadratic-form-comparison"] == "pass"
    ok = ok and comparison is not None and not comparison.is_zero()
    ok = ok and all(r.status == "pass" for r in suite_length(UNIT_CIRCLE))
    _verdict(f"minkowski-length (central, star-fixed, comparison scalar "
             f"{comparison})", ok)


def test_classical_limit():
    ok = all(r.status == "pass" for r in suite_classical(GENERIC))
    residuals, _, _ = braided_delta_check(UNIT_CIRCLE, sigma=ONE, classical=True)
    ok = ok and all(v.is_zero() for v in residuals.values())
    _verdict("classical-limit (flips, antisymmetrizers, commutativity)", ok)


def test_numeric_cross_check_and_wall_clock():
    rng = random.Random(11)
    worst = 0.0
    for _ in range(5):
        theta = rng.uniform(0.15, cmath.pi - 0.15)
        if abs(theta - cmath.pi / 2) < 0.12:
            theta += 0.3
        q = cmath.exp(1j * theta)
        for t in (0.5, 2.0):
            for resid in numeric_suite(UNIT_CIRCLE, q, t).values():
                worst = max(worst, resid)
    ok = worst < 1e-9
    t0 = time.perf_counter()
    for regime in ALL_REGIMES:
        for r in run_suites(regime, "all"):
            ok = ok and r.status != "fail"
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    _verdict(f"numeric-cross-check (max residual {worst:.2e}; full suite "
             f"{elapsed:.1f} s)", ok)
