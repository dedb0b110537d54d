"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each check returns (passed, detail) and prints one PASS/FAIL line. Run
directly with ``python tests/test_acceptance.py`` for the summary alone.
"""

import time

import numpy as np
import pytest

from meshtrap.calibration import (
    SWEEP_RANGES,
    CornerNeverBreaks,
    baseline_report,
    baseline_scenario,
    corner_threshold,
    dollar_welfare,
    sensitivity_sweep,
)
from meshtrap.equilibrium import generality_gap, grid_oracle, nash_equilibrium, social_optimum, trap_check
from meshtrap.governance import regime_comparison, subsidized_equilibrium
from meshtrap.sampling import random_interior_scenario, random_scenario
from meshtrap.welfare import debt_scaling_curve, total_debt

GAP_SEED = 7
ORACLE_SEED = 2024
RESTORATION_SEED = 99


def ac1_baseline_corner():
    t0 = time.perf_counter()
    nash = nash_equilibrium(baseline_scenario())
    elapsed = time.perf_counter() - t0
    g_ok = len(nash.profile) == 12 and bool(np.all(nash.profile.g == 0.0))
    q_dev = float(np.max(np.abs(nash.profile.q - 0.6)))
    ok = g_ok and q_dev <= 0.005 and elapsed < 1.0
    return ok, f"g all exactly 0: {g_ok}; max |q - 0.6| = {q_dev:.6f}; runtime {elapsed:.3f}s"


def ac2_trap_condition():
    s = baseline_scenario()
    t = trap_check(s)
    d = t.per_domain[0]
    ok = (
        abs(d.private_synergy - 0.075) <= 1e-12
        and abs(d.effective_fixed_cost - 0.4167) <= 0.001
        and d.private_synergy < d.effective_fixed_cost
        and t.organization_trapped
    )
    return ok, (f"alpha*beta = {d.private_synergy:.4f} < kappa/q* = {d.effective_fixed_cost:.5f}; "
                f"organization_trapped = {t.organization_trapped}")


def ac3_thresholds():
    base = baseline_scenario()
    k = corner_threshold(base, "kappa")
    b = corner_threshold(base, "beta")
    k_ok = abs(k.value - 0.045) <= 0.0005
    b_ok = abs(b.value - 0.83) <= 0.01
    lam_rows = sensitivity_sweep(base, "lambda", *SWEEP_RANGES["lambda"], 81)
    lo, hi = SWEEP_RANGES["n_domains"]
    n_rows = sensitivity_sweep(base, "n_domains", lo, hi, int(hi - lo + 1))
    sweeps_ok = all(r.trapped for r in lam_rows) and all(r.trapped for r in n_rows)
    try:
        corner_threshold(base, "lambda")
        lam_search_ok = False
    except CornerNeverBreaks:
        lam_search_ok = True
    ok = k_ok and b_ok and sweeps_ok and lam_search_ok
    return ok, (f"kappa threshold {k.value:.6f} (dev {k.deviation:+.6f}); beta threshold {b.value:.6f} "
                f"(self-consistent q*, dev {b.deviation:+.6f}); lambda 0.1-0.9 and N 3-50 trapped on every row: "
                f"{sweeps_ok}; lambda bisection reports never-breaks: {lam_search_ok}")


def ac4_gap_formula():
    rng = np.random.default_rng(GAP_SEED)
    worst = worst_corrected = 0.0
    for _ in range(200):
        s = random_interior_scenario(rng)
        gap = generality_gap(s)
        worst = max(worst, float(np.max(np.abs(gap.realized - gap.closed_form))))
        shift = s.kappa * (1 / gap.nash.profile.q - 1 / gap.optimum.profile.q) / s.gamma_g
        worst_corrected = max(worst_corrected, float(np.max(np.abs(gap.realized - gap.closed_form - shift))))
    ok = worst <= 1e-9
    return ok, (f"200 interior scenarios: max |realized - sum(lambda_ji)/gamma_g| = {worst:.3e} (tol 1e-9); "
                f"with the planner-quality term kappa(1/q_NE - 1/q_SO)/gamma_g added: {worst_corrected:.3e}")


def ac5_oracle():
    rng = np.random.default_rng(ORACLE_SEED)
    t0 = time.perf_counter()
    worst, misses, index_misses = 0.0, 0, 0
    for _ in range(100):
        s = random_scenario(rng, max_domains=6)
        ne = nash_equilibrium(s).profile
        orc = grid_oracle(s, 0.01)
        dev = max(float(np.max(np.abs(ne.q - orc.q))), float(np.max(np.abs(ne.g - orc.g))))
        worst = max(worst, dev)
        misses += dev > 0.01 + 1e-12
        snapped = max(np.max(np.abs(np.round(ne.q * 100) - np.round(orc.q * 100))),
                      np.max(np.abs(np.round(ne.g * 100) - np.round(orc.g * 100))))
        index_misses += snapped > 1
    elapsed = time.perf_counter() - t0
    ok = misses == 0 and elapsed < 60.0
    return ok, (f"{100 - misses}/100 scenarios within one grid step; max deviation {worst:.5f}; "
                f"runtime {elapsed:.1f}s; snapped to the lattice, {100 - index_misses}/100 within one index")


def ac6_restoration():
    rng = np.random.default_rng(RESTORATION_SEED)
    worst, clamp_mismatch = 0.0, 0
    for _ in range(100):
        s = random_scenario(rng)
        fed = subsidized_equilibrium(s).profile
        so = social_optimum(s.without_consumers(), "paper-foc").profile
        worst = max(worst, float(np.max(np.abs(fed.q - so.q))), float(np.max(np.abs(fed.g - so.g))))
        for a, b in ((fed.g, so.g), (fed.q, so.q)):
            clamp_mismatch += not (np.array_equal(a == 0, b == 0) and np.array_equal(a == 1, b == 1))
    ok = worst <= 1e-9 and clamp_mismatch == 0
    return ok, f"max |subsidized - planner| = {worst:.3e}; clamp mismatches: {clamp_mismatch}"


def ac7_debt_scaling():
    template = baseline_scenario()
    t = {}
    for n in (5, 20):
        s = template.with_n_domains(n)
        t[n] = total_debt(s, nash_equilibrium(s).profile).total
    per_pair = (t[5] / 20, t[20] / 380)
    ratio_ok = abs(t[20] / t[5] - 19.0) <= 1e-12 and abs(per_pair[0] - per_pair[1]) <= 1e-12
    curve = debt_scaling_curve(template, [4, 8, 16, 32])
    exp_ok = 1.95 <= curve.exponent <= 2.05
    return ratio_ok and exp_ok, (
        f"TD(20)/TD(5) = {t[20] / t[5]:.12f} (380/20 = 19): {ratio_ok}; log-log exponent over 4,8,16,32 = "
        f"{curve.exponent:.4f} (target [1.95, 2.05]); SSE a+bN^2 {curve.sse_quadratic:.3g} vs a+bN "
        f"{curve.sse_linear:.3g}"
    )


def ac8_regime_ordering():
    reports = {r.regime: r for r in regime_comparison(baseline_scenario(), 10.0, 0.7)}
    w = [reports[k].welfare for k in ("federated", "centralized", "hybrid", "pure-mesh")]
    ok = w[0] >= w[1] >= w[2] >= w[3]
    return ok, "welfare federated {:.4f} >= centralized {:.4f} >= hybrid {:.4f} >= pure-mesh {:.4f}".format(*w)


def ac9_dollars():
    d12 = dollar_welfare(12)
    d20 = dollar_welfare(20)
    ok = (
        d12.total == 9_000_000.0
        and "illustrative" in d12.label
        and d20.note is not None
        and "15,000,000" in d20.note
        and "20,000,000" in d20.note
    )
    return ok, f"N=12: ${d12.total:,.0f} ({d12.label}); N=20: ${d20.total:,.0f}; note: {d20.note}"


def ac10_discrepancy():
    r = baseline_report()
    ok = r["g_social_clamped"] == 1.0 and r["g_social_reference"] == 0.58 and "0.58" in r["g_social_note"]
    return ok, r["g_social_note"]


CRITERIA = [
    ("AC1 baseline corner", ac1_baseline_corner),
    ("AC2 trap condition", ac2_trap_condition),
    ("AC3 corner thresholds", ac3_thresholds),
    ("AC4 gap formula", ac4_gap_formula),
    ("AC5 oracle equivalence", ac5_oracle),
    ("AC6 subsidy restoration", ac6_restoration),
    ("AC7 debt scaling", ac7_debt_scaling),
    ("AC8 regime ordering", ac8_regime_ordering),
    ("AC9 dollar scenario", ac9_dollars),
    ("AC10 discrepancy surfacing", ac10_discrepancy),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_acceptance(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(name, *check()) for name, check in CRITERIA]
    for name, ok, detail in results:
        print(_line(name, ok, detail))
    print(f"{sum(ok for _, ok, _ in results)}/{len(results)} criteria pass")
