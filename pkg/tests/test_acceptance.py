"""Acceptance gate: one test per criterion, thresholds as stated.

Each test ends with a single printed pass line carrying the measured
numbers; a failed assertion is the corresponding fail line.  Expensive
criteria run on the full production grid (N = 2**15, L = 32 pi).
"""

import math

import numpy as np
import pytest

from bfamlab.besov import BesovParams, besov_norm, interpolation_defect, product_ratio
from bfamlab.data import build_phi, make_f_n, make_g_n, preset_u0
from bfamlab.experiments import (
    HarnessConfig,
    check_decoupling,
    check_transport_apriori,
    check_truncation_stability,
    check_two_solution_stability,
    make_stability_pairs,
    make_transport_problems,
    run_nonuniform_at,
    run_nonuniform_basic,
)
from bfamlab.grid import lebesgue_norm, make_field, make_grid
from bfamlab.lp import decompose
from bfamlab.oracles import load_reference
from bfamlab.solver import ModelParams, SolverConfig, conserved_quantities, evolve

PRM = BesovParams(2.0, 2.0, 2.0)


@pytest.fixture(scope="module")
def production():
    grid = make_grid(32.0 * math.pi, 2**15)
    cfg = HarnessConfig(grid=grid, solver=SolverConfig(dt=1e-3, t_end=0.25, sample_every=10))
    return grid, build_phi(grid), cfg


def _report_lines(report):
    return "; ".join(f"{c.name}={c.value:.4g}({'ok' if c.passed else 'FAIL'})" for c in report.checks)


def test_criterion_01_partition_of_unity(cut, grid_production):
    xi = np.linspace(0.0, grid_production.max_frequency, 10_000)
    defect = float(np.max(np.abs(cut.partition_sum(xi) - 1.0)))
    assert defect <= 1e-12
    print(f"[CRITERION 1] PASS partition-of-unity defect {defect:.3e} <= 1e-12")


def test_criterion_02_single_block_localization(production, cut):
    grid, phi, _ = production
    worst = 0.0
    for n in range(4, 8):
        f = make_f_n(grid, phi, n, PRM.s)
        total = lebesgue_norm(f, 2.0)
        blocks = decompose(f, cut)
        leak = max(lebesgue_norm(blocks[j], 2.0) for j in blocks.indices() if j != n)
        worst = max(worst, leak / total)
        assert leak <= 1e-12 * total, f"n={n}: off-block leak {leak / total:.3e}"
    print(f"[CRITERION 2] PASS packet localization: worst off-block leak {worst:.3e} <= 1e-12")


def test_criterion_03_theorem_premises(production, cut):
    grid, phi, _ = production
    triples = [(2.0, 2.0, 2.0), (2.0, 4.0, 2.0), (2.0, np.inf, 2.0)]
    summary = []
    for s, p, r in triples:
        prm = BesovParams(s, p, r)
        f_norms = [besov_norm(make_f_n(grid, phi, n, s), prm, cut) for n in range(4, 8)]
        g_norms = [besov_norm(make_g_n(grid, phi, n), prm, cut) for n in range(4, 8)]
        spread = max(f_norms) / min(f_norms) - 1.0
        assert spread <= 0.05, f"(s,p,r)=({s},{p},{r}): f_n spread {spread:.3%}"
        for a, b in zip(g_norms, g_norms[1:]):
            assert abs(b / a - 0.5) <= 1e-10, f"(s,p,r)=({s},{p},{r}): g ratio {b / a}"
        summary.append(f"({s:g},{p:g},{r:g}): spread {spread:.2%}")
    print(f"[CRITERION 3] PASS premises at all triples — {'; '.join(summary)}")


def test_criterion_04_solver_validity():
    grid = make_grid(32.0 * math.pi, 2**12)
    u0 = preset_u0("gaussian", grid)
    model = ModelParams(b=2.0)

    # trajectory self-convergence order against a fine reference at t = 0.1
    def final_state(dt):
        cfg = SolverConfig(dt=dt, t_end=0.1, sample_every=10**6)
        return evolve(u0, model, cfg).states[-1].values

    ref = final_state(2.5e-4)
    e_coarse = np.max(np.abs(final_state(4e-3) - ref))
    e_fine = np.max(np.abs(final_state(2e-3) - ref))
    order = math.log2(e_coarse / e_fine)
    assert order >= 3.6, f"self-convergence order {order:.2f}"

    drifts = {}
    for b in (2.0, 3.0):
        mdl = ModelParams(b=b)
        traj = evolve(u0, mdl, SolverConfig(dt=1e-3, t_end=0.5, sample_every=500))
        q0 = conserved_quantities(traj.states[0], mdl)
        q1 = conserved_quantities(traj.states[-1], mdl)
        mass_drift = abs(q1["mass_m"] - q0["mass_m"]) / max(1.0, abs(q0["mass_m"]))
        assert mass_drift <= 1e-10, f"b={b}: mass drift {mass_drift:.3e}"
        drifts[b] = mass_drift
        if b == 2.0:
            h1_drift = abs(q1["h1_energy"] - q0["h1_energy"]) / q0["h1_energy"]
            assert h1_drift <= 1e-6, f"H1 energy drift {h1_drift:.3e}"
    print(
        f"[CRITERION 4] PASS order {order:.2f} >= 3.6, H1 drift {h1_drift:.2e} <= 1e-6, "
        f"mass drift {max(drifts.values()):.2e} <= 1e-10"
    )


def test_criterion_05_nonuniform_basic(production):
    _, _, cfg = production
    report = run_nonuniform_basic(PRM, [4, 5, 6, 7], cfg)
    ref = load_reference()["frozen_phase_slopes"]
    lines = []
    for n in range(4, 8):
        slope = report.fits[f"d[n={n}]"].slope
        live = report.constants[f"c_pred[n={n}]"]
        committed = ref[str(n)]
        assert live == pytest.approx(committed, rel=5e-3), f"oracle drift at n={n}"
        assert slope >= 0.5 * committed, f"n={n}: slope {slope:.4f} < 0.5*{committed:.4f}"
        lines.append(f"n={n}: {slope:.4f}/{committed:.4f}")
    assert report.passed, _report_lines(report)
    print(f"[CRITERION 5] PASS slopes vs committed c_pred — {'; '.join(lines)}")


def test_criterion_06_nonuniform_at(production):
    grid, _, cfg = production
    m = grid.half_length / 2.0
    lines = []
    for u0_name in ("gaussian", "smoothed_peakon"):
        report = run_nonuniform_at(u0_name, PRM, [4, 5, 6], m, cfg)
        assert report.passed, f"{u0_name}: {_report_lines(report)}"
        worst = max(report.constants[f"remainder_ratio[n={n}]"] for n in (4, 5, 6))
        slopes = [report.fits[f"D[n={n}]"].slope for n in (4, 5, 6)]
        lines.append(f"{u0_name}: slopes {['%.4f' % s for s in slopes]}, max rem ratio {worst:.3f}")
    print(f"[CRITERION 6] PASS nowhere version — {'; '.join(lines)}")


def test_criterion_07_truncation_ratio_stability(production):
    grid, _, cfg = production
    m = grid.half_length / 2.0
    report = check_truncation_stability("power_tail", PRM, [4, 5, 6, 7], 1, m, cfg)
    assert report.passed, _report_lines(report)
    change = next(c.value for c in report.checks if c.name == "ratio_stable")
    assert change <= 0.15

    # band-limited datum: truncation is exact, the gap stays at rounding level
    small_grid = make_grid(32.0 * math.pi, 2**13)
    small_cfg = HarnessConfig(grid=small_grid, solver=cfg.solver)
    exact = check_truncation_stability("low_band_random(1)", PRM, [4, 5], 1, m, small_cfg)
    peaks = [c.value for c in exact.checks if c.name.startswith("exact_truncation")]
    assert len(peaks) == 2 and all(v <= 1e-8 for v in peaks)
    print(
        f"[CRITERION 7] PASS ratio max {report.constants['ratio_max_overall']:.3f} stable to "
        f"{change:.2%} (<=15%); band-limited LHS peak {max(peaks):.2e} <= 1e-8"
    )


def test_criterion_08_decoupling(production):
    grid, _, cfg = production
    m_list = [8.0, 16.0, grid.half_length / 2.0]
    report = check_decoupling("gaussian", PRM, 5, 1, m_list, cfg)
    assert report.passed, _report_lines(report)
    rate = report.constants["f_drop_per_doubling"]
    assert rate >= 3.0
    f_vals = [report.constants[f"F_T0[m={m:g}]"] for m in report.config["m_list"]]
    print(
        f"[CRITERION 8] PASS F(T0) monotone {['%.3e' % v for v in f_vals]}, "
        f"drop {rate:.1f}x per doubling (>= 3x), theta = {report.constants['theta']:.4f}"
    )


def test_criterion_09_gronwall_envelopes():
    grid = make_grid(32.0 * math.pi, 2**12)
    cfg = HarnessConfig(grid=grid, solver=SolverConfig(dt=1e-3, t_end=0.25, sample_every=10))

    pair_report = check_two_solution_stability(make_stability_pairs(grid, 40, seed=101), PRM, cfg)
    assert pair_report.passed, _report_lines(pair_report)

    sigmas = {"supercritical": 2.0, "critical": 1.5, "subcritical": 1.2}
    t_lines = []
    for case, sigma in sigmas.items():
        probs = make_transport_problems(grid, 40, seed=200 + int(10 * sigma))
        report = check_transport_apriori(probs, sigma, 2.0, 2.0, cfg)
        assert report.passed, f"{case} (sigma={sigma}): {_report_lines(report)}"
        t_lines.append(f"{case} C={report.constants['C_first']:.3f}")
    print(
        f"[CRITERION 9] PASS zero held-out violations: two-solution "
        f"(C_low={pair_report.constants['C_low']:.3f}, "
        f"C_high={pair_report.constants['C_high']:.3f}); transport {'; '.join(t_lines)}"
    )


def test_criterion_10_inequality_sweeps(cut):
    grid = make_grid(16.0 * math.pi, 2**10)
    rng = np.random.default_rng(77)
    worst_defect = -np.inf
    for _ in range(500):
        u = make_field(grid, rng.standard_normal(grid.num_points))
        d = interpolation_defect(u, 1.0, 3.0, 0.6, 2.0, 2.0, cut)
        worst_defect = max(worst_defect, d)
    assert worst_defect <= 1e-12

    from bfamlab.lp import low_pass

    ratios = []
    for i in range(500):
        u = low_pass(make_field(grid, rng.standard_normal(grid.num_points)), 4, cut)
        v = low_pass(make_field(grid, rng.standard_normal(grid.num_points)), 4, cut)
        ratios.append(product_ratio(u, v, PRM, cut))
    sup_half = max(ratios[:250])
    sup_full = max(ratios)
    change = abs(sup_full - sup_half) / sup_half
    assert change < 0.10, f"product-ratio supremum changed {change:.2%} on doubling"
    print(
        f"[CRITERION 10] PASS interpolation defect max {worst_defect:.2e} <= 1e-12; "
        f"product-ratio sup {sup_full:.3f} changed {change:.2%} (< 10%) on doubling the sample"
    )


def test_criterion_11_robustness():
    solver = SolverConfig(dt=1e-3, t_end=0.25, sample_every=10)
    n_list = [4, 5, 6]

    def slopes(L, N):
        cfg = HarnessConfig(grid=make_grid(L, N), solver=solver)
        report = run_nonuniform_basic(PRM, n_list, cfg)
        return np.array([report.fits[f"d[n={n}]"].slope for n in n_list])

    base = slopes(32.0 * math.pi, 2**14)
    finer = slopes(32.0 * math.pi, 2**15)  # doubled N, same L
    wider = slopes(64.0 * math.pi, 2**15)  # doubled L, same dx
    dn = float(np.max(np.abs(finer - base) / base))
    dl = float(np.max(np.abs(wider - base) / base))
    assert dn < 0.01, f"slope change {dn:.3%} on doubling N"
    assert dl < 0.05, f"slope change {dl:.3%} on doubling L"
    print(f"[CRITERION 11] PASS slope changes: doubling N {dn:.3%} (<1%), doubling L {dl:.3%} (<5%)")
