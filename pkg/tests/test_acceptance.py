"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS / FAIL line; the lines are printed as they run
and again in the pytest terminal summary.
"""

import functools
import math
import sys
import time

import numpy as np
import pytest

from extropy_ratios import (
    Beta,
    Exponential,
    Kind,
    Uniform,
    estimate_similarity_CE,
    estimate_similarity_SE,
    similarity_report,
)
from extropy_ratios.images import (
    GrayscaleImage,
    classify,
    scale_exposure,
    similarity_to_reference,
    synthetic_image,
)
from extropy_ratios.simulation import SCENARIOS, run_bias_mse, run_invariance_table, run_theorem_suites

from helpers import random_pairs

RESULTS = []


def record(label, ok, detail=""):
    ok = bool(ok)
    RESULTS.append((ok, label, detail))
    print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
    assert ok, f"{label}: {detail}"


# closed-form reproduction ---------------------------------------------------------

@functools.lru_cache(maxsize=None)
def closed_forms():
    t0 = time.perf_counter()
    s_beta = similarity_report(Beta(3, 2).density(), Beta(2, 3).density()).similarity
    s_se = similarity_report(Exponential(1).survival(), Exponential(2).survival()).similarity
    s_e = similarity_report(Exponential(1).density(), Exponential(2).density()).similarity
    s_ce = similarity_report(Uniform(0, 1).cumulative(), Beta(3, 2).cumulative()).similarity
    step = 0.05
    rates = np.round(np.arange(0.2, 10.0 + step / 2, step), 12)
    other = Exponential(3).density()
    curve = np.array([similarity_report(Exponential(float(r)).density(), other).similarity for r in rates])
    elapsed = time.perf_counter() - t0
    return dict(s_beta=s_beta, s_se=s_se, s_e=s_e, s_ce=s_ce, rates=rates, curve=curve, step=step, elapsed=elapsed)


def test_closed_form_beta_density():
    v = closed_forms()["s_beta"]
    record("S_E(Beta(3,2), Beta(2,3)) = 0.5625 +- 1e-6", abs(v - 0.5625) <= 1e-6, f"got {v!r}")


def test_closed_form_exponential_survival():
    r = closed_forms()
    ok = abs(r["s_se"] - 8 / 9) <= 1e-8 and abs(r["s_se"] - r["s_e"]) <= 1e-8
    record("S_SE(Exp(1), Exp(2)) = 8/9 = S_E +- 1e-8", ok, f"S_SE={r['s_se']!r} S_E={r['s_e']!r}")


def test_closed_form_uniform_beta_cumulative():
    v = closed_forms()["s_ce"]
    record("S_CE(Uniform(0,1), Beta(3,2)) = 0.945 +- 1e-6", abs(v - 0.945) <= 1e-6, f"got {v!r}")


def test_sweep_maximum():
    r = closed_forms()
    i = int(np.argmax(r["curve"]))
    at, peak = float(r["rates"][i]), float(r["curve"][i])
    ok = abs(at - 3.0) <= r["step"] and abs(peak - 1.0) <= 1e-8
    record("sweep S_E(l1, 3): max at l1 = 3 +- step, value 1 +- 1e-8", ok, f"argmax={at} max={peak!r}")


def test_closed_form_runtime():
    r = closed_forms()
    record("closed-form reproduction runtime < 1 s", r["elapsed"] < 1.0, f"{r['elapsed']:.3f} s")


# estimator consistency ------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def monte_carlo():
    t0 = time.perf_counter()
    out = {}
    for name in ("table1", "table2", "table3"):
        sc = SCENARIOS[name].with_options(sizes=(50, 200), replications=500, seed=2024)
        out[name] = {row.n: row for row in run_bias_mse(sc)}
    return out, time.perf_counter() - t0


def test_table2_consistency():
    rows = monte_carlo()[0]["table2"]
    ok = abs(rows[200].bias) <= 0.01 and rows[200].mse < rows[50].mse
    record("table2: |bias(200)| <= 0.01 and MSE(200) < MSE(50)", ok,
           f"bias={rows[200].bias:.5f} mse50={rows[50].mse:.5f} mse200={rows[200].mse:.5f}")


def test_table1_bias():
    rows = monte_carlo()[0]["table1"]
    record("table1: |bias(200)| <= 0.02", abs(rows[200].bias) <= 0.02, f"bias={rows[200].bias:.5f}")


def test_table3_estimate():
    rows = monte_carlo()[0]["table3"]
    record("table3: mean estimate(200) within 0.05 of 0.945", abs(rows[200].mean - 0.945) <= 0.05,
           f"mean={rows[200].mean:.5f}")


def test_monte_carlo_runtime():
    elapsed = monte_carlo()[1]
    record("Monte Carlo (500 replications) runtime < 2 min", elapsed < 120, f"{elapsed:.1f} s")


# invariance ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def invariance():
    return run_invariance_table(seed=7, n=1000)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_scale_invariance():
    base, double, half = invariance()[:3]
    worst = max(rel(getattr(r, a), getattr(base, a)) for r in (double, half) for a in ("s_se", "s_ce", "s_e"))
    record("S_SE, S_CE, S_E unchanged under scaling by 0.5, 2 (1e-12)", worst <= 1e-12, f"max rel diff {worst:.2e}")


def test_shift_invariance():
    base, shifted = invariance()[0], invariance()[3]
    worst = max(rel(shifted.s_se, base.s_se), rel(shifted.s_ce, base.s_ce))
    record("S_SE, S_CE unchanged under shift +0.5 (1e-12)", worst <= 1e-12, f"max rel diff {worst:.2e}")


def test_kernel_shift_stability():
    base, shifted = invariance()[0], invariance()[3]
    delta = abs(shifted.s_e - base.s_e)
    record("|delta S_E| under shift +0.5 <= 0.05", delta <= 0.05, f"delta={delta:.2e}")


# theorem suites -----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def theorem_run():
    t0 = time.perf_counter()
    report = run_theorem_suites(phm_grid=(0.25, 0.5, 2.0, 4.0), prhm_grid=(0.5, 2.0, 3.0))
    failures, both_below = {}, {}
    for kind in Kind:
        bad = below = 0
        for d1, d2 in random_pairs(kind, 1000, seed=7000 + list(Kind).index(kind)):
            r = similarity_report(d1.function(kind), d2.function(kind))
            # order relation: each ratio above 1 forces the other below 1 (1e-12 dead band)
            order = not (r.i12 > 1 + 1e-12 and r.i21 >= 1) and not (r.i21 > 1 + 1e-12 and r.i12 >= 1)
            ok = (
                0 < r.similarity <= 1
                and abs(r.similarity - r.i12 * r.i21) / r.similarity <= 1e-9
                and order
                and r.i12 <= math.sqrt(r.u2 / r.u1) + 1e-9
            )
            bad += not ok
            below += r.i12 < 1 and r.i21 < 1
        failures[kind], both_below[kind] = bad, below
    return report, failures, both_below, time.perf_counter() - t0


def test_phm_battery():
    report = theorem_run()[0]
    checks = [c for c in report.checks if c.suite == "phm"]
    ok = len(checks) == 32 and all(c.passed for c in checks) and not report.errors
    record("PHM battery passes for c in {0.25, 0.5, 2, 4}", ok, f"{sum(c.passed for c in checks)}/{len(checks)} checks")


def test_prhm_battery():
    report = theorem_run()[0]
    checks = [c for c in report.checks if c.suite == "prhm"]
    oracle = next(c.lhs for c in checks if c.c == 2.0 and c.name == "I_CE(X|Y) vs 1")
    ok = all(c.passed for c in checks) and abs(oracle - 0.75) <= 1e-8
    record("PRHM battery passes for c in {0.5, 2, 3}; I_CE(X|Y) = 0.75 at c=2", ok,
           f"{sum(c.passed for c in checks)}/{len(checks)} checks, I_CE={oracle!r}")


def test_random_pair_properties():
    failures, both_below = theorem_run()[1:3]
    detail = ", ".join(f"{k.value}: {failures[k]} bad ({both_below[k]} with both ratios < 1)" for k in Kind)
    record("1000 random pairs per kind: bounds, product, order, Cauchy-Schwarz", not any(failures.values()), detail)


def test_theorem_runtime():
    elapsed = theorem_run()[3]
    record("theorem suites runtime < 10 s", elapsed < 10, f"{elapsed:.2f} s")


# hand oracles ---------------------------------------------------------------------------

def test_hand_oracles():
    seen = {(estimate_similarity_SE([1, 2], [1, 3]).similarity, estimate_similarity_CE([1, 2], [1, 3]).similarity)
            for _ in range(10)}
    record("S_SE({1,2},{1,3}) = 0.5 and S_CE = 0.9 exactly, bit-stable", seen == {(0.5, 0.9)}, f"{seen}")


# image suite ------------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def image_run():
    t0 = time.perf_counter()
    quad = GrayscaleImage([[0.25, 0.5], [0.75, 1.0]])
    value = similarity_to_reference(quad)
    drift = max(rel(similarity_to_reference(scale_exposure(quad, c)), value) for c in (0.25, 0.5, 0.75))
    anchors = [(f"g{k}", synthetic_image(k, 64, 64, shape=1.5 + k)) for k in range(3)]
    mixed = [(gid, scale_exposure(img, c)) for gid, img in anchors for c in (1.0, 0.75, 0.5, 0.25)]
    results = classify(mixed, anchors)
    correct = sum(r.group == gid for r, (gid, _) in zip(results, mixed))
    return value, drift, correct, len(mixed), time.perf_counter() - t0


def test_reference_value():
    value, drift = image_run()[:2]
    ok = abs(value - 5 / 6) <= 1e-12 and drift <= 1e-12
    record("reference S of {.25,.5,.75,1} = 5/6, exposure invariant (1e-12)", ok,
           f"S={value!r} drift={drift:.1e}")


def test_classification():
    correct, total = image_run()[2:4]
    record("classify 3 anchors x 4 exposures: 12/12 correct", correct == total == 12, f"{correct}/{total}")


def test_image_runtime():
    elapsed = image_run()[4]
    record("image suite runtime < 5 s", elapsed < 5, f"{elapsed:.2f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
