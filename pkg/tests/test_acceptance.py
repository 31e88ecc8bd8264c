"""Acceptance suite: one test per release criterion, at the stated tolerance.

Each test prints an `ACCEPTANCE Cnn PASS ...` line (visible with `pytest -s`
or `-rA`); a failing criterion raises before its line is printed and pytest
reports it as FAIL.  Run: pytest tests/test_acceptance.py -v -s
"""

from __future__ import annotations

import numpy as np
import pytest

from enercycle import (IntegratorSettings, SolowParams, VdPParams,
                       bisect_threshold, check_kaldor_requirements,
                       classify_eigenvalues, derived_constants,
                       detect_limit_cycle, eig2, fixed_points_2d, integrate,
                       production, production_partials, rhs_full3,
                       rhs_reduced_yk_coupled, solow_statics, split)
from enercycle.analysis import BracketingError, measure_cycle
from enercycle.model import ProductionParams
from conftest import make_model_params, sample_model_params

N_PROPERTY_SAMPLES = 1000


def _report(criterion: str, detail: str) -> None:
    print(f"ACCEPTANCE {criterion} PASS  {detail}")


def test_c01_equilibrium_invariance_property():
    rng = np.random.default_rng(101)
    worst3 = worst2 = 0.0
    for _ in range(N_PROPERTY_SAMPLES):
        params = sample_model_params(rng)
        cons = derived_constants(params)
        Y0 = params.production.Y0
        r3 = np.max(np.abs(rhs_full3((Y0, cons.K0, cons.E0), params)))
        r2 = np.max(np.abs(rhs_reduced_yk_coupled((Y0, cons.K0), params)))
        worst3 = max(worst3, float(r3))
        worst2 = max(worst2, float(r2))
    assert worst3 < 1e-10
    assert worst2 < 1e-10
    _report("C01", f"baseline equilibrium residuals: 3D {worst3:.2e}, 2D {worst2:.2e} "
                   f"over {N_PROPERTY_SAMPLES} random parameter sets")


def test_c02_reference_run_convergence_and_cycle():
    converging = make_model_params(zeta=0.04)
    cons = derived_constants(converging)
    traj = integrate("full3", (3.3, cons.K0, cons.E0), converging)
    final = traj.final_state
    assert final[0] == pytest.approx(3.0, abs=1e-3)
    assert final[1] == pytest.approx(4.0, abs=1e-3)
    assert final[2] == pytest.approx(1.7544, abs=1e-3)

    cycling = make_model_params(zeta=0.02)
    cons_b = derived_constants(cycling)
    traj_b = integrate("full3", (3.3, cons_b.K0, cons_b.E0), cycling)
    t_tail, y_tail = traj_b.tail()
    cycle = measure_cycle(t_tail, y_tail[:, 0])
    assert cycle is not None, "no sustained cycle detected"
    assert cycle.y_mean > 3.0
    # amplitude drift per period below 1%: compare successive cycle maxima
    level = cycle.y_mean
    ups = [t_tail[i] for i in range(len(t_tail) - 1)
           if y_tail[i, 0] < level <= y_tail[i + 1, 0]]
    maxima = []
    for a, b in zip(ups[:-1], ups[1:]):
        seg = (t_tail >= a) & (t_tail <= b)
        maxima.append(float(y_tail[seg, 0].max()))
    drift = np.max(np.abs(np.diff(maxima))) / (cycle.y_max - cycle.y_min)
    assert drift < 0.01
    _report("C02", f"strong dissipation converges to (3, 4, 1.7544); weak dissipation "
                   f"cycles with mean {cycle.y_mean:.3f} > 3, drift {drift:.2e}/period")


def test_c03_fixed_point_values(fig2_params):
    ys = [fp.Y for fp in fixed_points_2d(fig2_params)]
    assert ys == pytest.approx([1.25, 3.1397, 6.3103], abs=1e-4)
    _report("C03", f"equilibria at Y* = {np.round(ys, 5).tolist()}")


def test_c04_zeta_hopf_threshold(fig2_params):
    res = bisect_threshold(fig2_params, "zeta", (0.03, 0.2), "trace-zero", branch="lower")
    assert res.value == pytest.approx(0.04678, abs=1e-4)
    _report("C04", f"baseline-branch oscillation threshold zeta = {res.value:.6f}")


def test_c05_eps_stabilization_threshold(fig2_params):
    res = bisect_threshold(fig2_params, "eps_K", (0.05, 0.5), "trace-zero", branch="lower")
    assert res.value == pytest.approx(0.234375, abs=1e-4)
    _report("C05", f"baseline-branch stabilization at eps_K = {res.value:.6f}")


def test_c06_saddle_node_threshold(fig2_params):
    res = bisect_threshold(fig2_params, "zeta", (0.01, 0.1), "saddle-node")
    assert res.value == pytest.approx(0.021835, abs=1e-4)
    # a tenfold larger value is far from the fold: one equilibrium, no bracket
    assert len(fixed_points_2d(fig2_params.with_control("zeta", 0.218))) == 1
    with pytest.raises(BracketingError):
        bisect_threshold(fig2_params, "zeta", (0.2, 0.24), "saddle-node")
    _report("C06", f"fold at zeta = {res.value:.6f}; no fold anywhere near 0.218")


def test_c07_upper_branch_hopf(fig2_params):
    res = bisect_threshold(fig2_params, "eps_K", (0.01, 0.2), "trace-zero", branch="upper")
    assert res.value == pytest.approx(0.0543, abs=1e-3)
    _report("C07", f"upper-branch stabilization at eps_K = {res.value:.6f}")


def test_c08_bistability(fig2_params):
    params = fig2_params.with_control("d1", 0.45)
    points = fixed_points_2d(params)
    ys = [fp.Y for fp in points]
    assert ys == pytest.approx([0.2629, 1.25, 20.687], abs=1e-3)
    classes = [fp.classification for fp in points]
    assert classes[0].startswith("stable")
    assert classes[1] == "saddle"
    assert classes[2].startswith("stable")

    settings = IntegratorSettings(t_end=3000.0)
    s_over_kappa = params.capital.s / params.capital.kappa
    low = integrate("reduced-yk-coupled", (0.5, s_over_kappa * 0.5), params, settings)
    high = integrate("reduced-yk-coupled", (10.0, s_over_kappa * 10.0), params, settings)
    assert low.final_state[0] == pytest.approx(ys[0], abs=1e-4)
    assert high.final_state[0] == pytest.approx(ys[2], abs=1e-4)
    _report("C08", f"coexisting stable states at Y = {ys[0]:.4f} and {ys[2]:.3f}; "
                   "basins separate initial production 0.5 from 10")


def test_c09_split_identity_and_requirement_verdicts(fig3_params):
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(N_PROPERTY_SAMPLES):
        params = sample_model_params(rng, require_baseline=False)
        Y = rng.uniform(-5, 10)
        K = rng.uniform(0, 20)
        reference = rhs_reduced_yk_coupled((Y, K), params)[0]
        for kind in ("symmetric", "linear-saving", "uneven"):
            point = split(kind, params, Y, K)
            scale = max(1.0, abs(reference), abs(point.I) + abs(point.S))
            worst = max(worst, abs((point.I - point.S) - reference) / scale)
    assert worst < 1e-12

    reports = {kind: check_kaldor_requirements(kind, fig3_params, k_ref=6.0)
               for kind in ("symmetric", "linear-saving", "uneven")}
    assert not reports["symmetric"].i_monotone_in_y
    assert not reports["symmetric"].passes
    assert not reports["linear-saving"].s_depends_on_k
    assert not reports["linear-saving"].passes
    assert reports["uneven"].passes
    _report("C09", f"I-S identity residual {worst:.2e} over {N_PROPERTY_SAMPLES} samples; "
                   "verdicts: symmetric fails slope, linear-saving capital-blind, uneven passes")


def test_c10_production_function_laws():
    rng = np.random.default_rng(107)
    for _ in range(N_PROPERTY_SAMPLES):
        a_K = rng.uniform(0.1, 0.9)
        p = ProductionParams(A=rng.uniform(0.3, 3.0), a_K=a_K, a_E=1.0 - a_K,
                             Y0=rng.uniform(0.5, 5.0))
        K, E = rng.uniform(0.2, 10.0, size=2)
        lam = rng.uniform(0.1, 10.0)
        eff = lambda k, e: production(p, k, e) - p.Y0
        assert eff(lam * K, lam * E) == pytest.approx(lam * eff(K, E), rel=1e-12)
        dK, dE = production_partials(p, K, E)
        assert K * dK + E * dE == pytest.approx(eff(K, E), rel=1e-10)
        h = 1e-6 * max(1.0, K)
        fd_K = (production(p, K + h, E) - production(p, K - h, E)) / (2 * h)
        assert dK == pytest.approx(fd_K, rel=1e-6)
        h = 1e-6 * max(1.0, E)
        fd_E = (production(p, K, E + h) - production(p, K, E - h)) / (2 * h)
        assert dE == pytest.approx(fd_E, rel=1e-6)
        h = 1e-4 * max(1.0, K)
        d2 = (eff(K + h, E) - 2 * eff(K, E) + eff(K - h, E)) / h ** 2
        assert d2 < 0
    _report("C10", f"homogeneity, Euler, curvature and marginal products verified "
                   f"on {N_PROPERTY_SAMPLES} random inputs")


def test_c11_van_der_pol():
    settings = IntegratorSettings(t_end=400.0, max_step=0.5)
    cycle = detect_limit_cycle("vdp", VdPParams(omega=5.0), initial=(0.5, 0.0),
                               settings=settings)
    assert cycle is not None
    assert 1.9 <= cycle.y_max <= 2.1
    assert 1.9 <= abs(cycle.y_min) <= 2.1
    assert cycle.phase_ratio > 2.0
    for omega in (0.5, 1.0, 5.0):
        J = np.array([[omega, -omega], [1.0 / omega, 0.0]])
        assert classify_eigenvalues(eig2(J)).startswith("unstable")
    _report("C11", f"relaxation cycle amplitude {cycle.y_max:.3f}, slow/fast phase "
                   f"ratio {cycle.phase_ratio:.1f}; origin unstable")


def test_c12_solow_statics_and_simulation():
    params = SolowParams(A=1.0, alpha=0.5, s=0.2, r=0.01, kappa=0.04)
    st = solow_statics(params)
    assert st.k_star == pytest.approx(16.0, rel=1e-12)
    assert st.s_gold == 1.0 - params.alpha
    traj = integrate("solow", (1.0,), params, IntegratorSettings(t_end=500.0))
    assert abs(traj.final_state[0] - st.k_star) < 1e-4
    _report("C12", f"steady state k* = {st.k_star}, golden savings rate {st.s_gold}; "
                   f"simulation reaches |k - k*| = {abs(traj.final_state[0] - 16):.1e}")


def test_c13_business_cycle_phase_asymmetry():
    params = make_model_params(zeta=0.02)
    cons = derived_constants(params)
    cycle = detect_limit_cycle("full3", params, initial=(3.3, cons.K0, cons.E0))
    assert cycle is not None
    assert cycle.phase_ratio > 1.2
    _report("C13", "boom/recession/depression/recovery durations "
                   f"{tuple(round(d, 2) for d in cycle.phase_durations)}, "
                   f"ratio {cycle.phase_ratio:.2f}")


def test_c14_rk4_order():
    from test_integrate import DECAY_FIELD
    errors = {}
    for dt in (0.1, 0.05):
        s = IntegratorSettings(method="rk4-fixed", dt=dt, t_end=5.0)
        traj = integrate(DECAY_FIELD, (1.0,), None, s)
        errors[dt] = float(np.max(np.abs(traj.states[:, 0] - np.exp(-traj.times))))
    ratio = errors[0.1] / errors[0.05]
    assert ratio >= 14.0
    _report("C14", f"halving the step shrinks the global error {ratio:.1f}x")
