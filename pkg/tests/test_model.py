"""Production function, parameter validation and closed-form constants."""

from __future__ import annotations

import numpy as np
import pytest

from enercycle import (CapitalParams, DegenerateParamError, EigenParams,
                       EnergyParams, ParamError, ProductionParams, SolowParams,
                       TimeScales, VdPParams, coefficients, derived_constants,
                       dissipation_gamma_E, eigendynamics, implied_productivity,
                       production, production_partials)
from conftest import make_model_params, sample_model_params


class TestProduction:
    def test_zero_input_baseline(self):
        p = ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=3.0)
        assert production(p, K=0.0, E=5.0) == 3.0
        assert production(p, K=5.0, E=0.0) == 3.0

    def test_square_root_case(self):
        p = ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=3.0)
        assert production(p, K=4.0, E=4.0) == pytest.approx(7.0)

    def test_with_floors(self):
        p = ProductionParams(A=2.0, a_K=0.5, a_E=0.5, Y0=1.25, K_f=1.0, E_f=1.0)
        assert production(p, K=5.0, E=2.0) == pytest.approx(5.25)

    def test_below_floor_rejected(self):
        p = ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=3.0, K_f=1.0)
        with pytest.raises(ValueError):
            production(p, K=0.5, E=2.0)
        with pytest.raises(ValueError):
            production(p, K=2.0, E=-0.1)

    def test_partials_hand_value(self):
        p = ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=3.0)
        dK, dE = production_partials(p, K=4.0, E=4.0)
        assert dK == pytest.approx(0.5)
        assert dE == pytest.approx(0.5)

    def test_partials_symmetric_inputs(self):
        p = ProductionParams(A=1.7, a_K=0.5, a_E=0.5, Y0=1.0)
        dK, dE = production_partials(p, K=2.5, E=2.5)
        assert dK == dE

    def test_partials_singular_at_floor(self):
        p = ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=3.0)
        with pytest.raises(ValueError):
            production_partials(p, K=0.0, E=1.0)

    def test_partials_match_finite_differences(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a_K = rng.uniform(0.2, 0.8)
            p = ProductionParams(A=rng.uniform(0.5, 3.0), a_K=a_K, a_E=1.0 - a_K,
                                 Y0=rng.uniform(0.5, 5.0),
                                 K_f=rng.uniform(0, 1), E_f=rng.uniform(0, 1))
            K = p.K_f + rng.uniform(0.5, 10.0)
            E = p.E_f + rng.uniform(0.5, 10.0)
            h = 1e-6
            dK, dE = production_partials(p, K, E)
            fd_K = (production(p, K + h, E) - production(p, K - h, E)) / (2 * h)
            fd_E = (production(p, K, E + h) - production(p, K, E - h)) / (2 * h)
            assert dK == pytest.approx(fd_K, rel=1e-6)
            assert dE == pytest.approx(fd_E, rel=1e-6)


class TestProductionLaws:
    """Scaling laws of the above-baseline part of the production function."""

    @staticmethod
    def _effective(p, K, E):
        return production(p, K, E) - p.Y0

    def test_linear_homogeneity(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a_K = rng.uniform(0.1, 0.9)
            p = ProductionParams(A=rng.uniform(0.5, 3.0), a_K=a_K, a_E=1 - a_K, Y0=1.0)
            K, E = rng.uniform(0.1, 10.0, size=2)
            lam = rng.uniform(0.1, 10.0)
            scaled = self._effective(p, lam * K, lam * E)
            assert scaled == pytest.approx(lam * self._effective(p, K, E), rel=1e-12)

    def test_euler_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            a_K = rng.uniform(0.1, 0.9)
            p = ProductionParams(A=rng.uniform(0.5, 3.0), a_K=a_K, a_E=1 - a_K, Y0=1.0)
            K, E = rng.uniform(0.1, 10.0, size=2)
            dK, dE = production_partials(p, K, E)
            assert K * dK + E * dE == pytest.approx(self._effective(p, K, E), rel=1e-10)

    def test_diminishing_returns(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            a_K = rng.uniform(0.1, 0.9)
            p = ProductionParams(A=rng.uniform(0.5, 3.0), a_K=a_K, a_E=1 - a_K, Y0=1.0)
            K, E = rng.uniform(0.5, 10.0, size=2)
            h = 1e-4 * max(1.0, K)
            d2K = (production(p, K + h, E) - 2 * production(p, K, E)
                   + production(p, K - h, E)) / h ** 2
            h = 1e-4 * max(1.0, E)
            d2E = (production(p, K, E + h) - 2 * production(p, K, E)
                   + production(p, K, E - h)) / h ** 2
            assert d2K < 0
            assert d2E < 0


class TestValidation:
    def test_elasticities_must_sum_to_one(self):
        with pytest.raises(ParamError):
            ProductionParams(A=1.0, a_K=0.6, a_E=0.5, Y0=1.0)

    def test_positive_requirements(self):
        with pytest.raises(ParamError):
            ProductionParams(A=0.0, a_K=0.5, a_E=0.5, Y0=1.0)
        with pytest.raises(ParamError):
            ProductionParams(A=1.0, a_K=0.5, a_E=0.5, Y0=-1.0)
        with pytest.raises(ParamError):
            CapitalParams(s=1.0, kappa=0.5)
        with pytest.raises(ParamError):
            CapitalParams(s=0.5, kappa=0.0)
        with pytest.raises(ParamError):
            EnergyParams(q=0.5, c=0.0, d1=0.1, zeta=0.1)
        with pytest.raises(ParamError):
            EigenParams(g1=0.0, g2=0.0)
        with pytest.raises(ParamError):
            TimeScales(eps_K=-0.1, eps_E=1.0)
        with pytest.raises(ParamError):
            SolowParams(A=1.0, alpha=0.5, s=0.2, r=-0.1, kappa=0.05)
        with pytest.raises(ParamError):
            VdPParams(omega=0.0)

    def test_zeta_required_with_coupling(self):
        with pytest.raises(ParamError):
            EnergyParams(q=0.5, c=0.6, d1=0.2, zeta=0.0)
        # both off is a valid configuration (no saturation channel at all)
        en = EnergyParams(q=0.5, c=0.6, d1=0.0, zeta=0.0)
        assert en.Y_s == 0.0

    def test_with_control_revalidates(self):
        params = make_model_params()
        bumped = params.with_control("zeta", 0.1)
        assert bumped.energy.zeta == 0.1
        assert params.energy.zeta == 0.04  # original untouched
        with pytest.raises(ParamError):
            params.with_control("kappa", -1.0)
        with pytest.raises(ParamError):
            params.with_control("bogus", 1.0)


class TestDerivedConstants:
    def test_fig1_values(self, fig1a_params):
        cons = derived_constants(fig1a_params)
        assert cons.Y_s == pytest.approx(5.625)
        assert cons.K0 == pytest.approx(4.0)
        assert cons.E0 == pytest.approx(0.5 / 0.285, rel=1e-12)
        assert cons.E_Q == pytest.approx(0.5 / 0.6, rel=1e-12)
        assert cons.A_squared == pytest.approx(4.5 * 0.285, rel=1e-12)

    def test_fig1_low_zeta_values(self, fig1b_params):
        cons = derived_constants(fig1b_params)
        assert cons.Y_s == pytest.approx(11.25)
        assert cons.K0 == pytest.approx(4.0)
        assert cons.E0 == pytest.approx(0.5 / 0.105, rel=1e-12)

    def test_no_saturation_collapses_to_source_level(self):
        params = make_model_params(d1=0.0, zeta=0.0)
        cons = derived_constants(params)
        assert cons.E0 == cons.E_Q

    def test_degenerate_denominator_raises(self, fig2_params):
        # c = 0.06 is far below the baseline energy uptake for these parameters
        with pytest.raises(DegenerateParamError):
            derived_constants(fig2_params)

    def test_implied_productivity_places_baseline_on_surface(self, fig1a_params):
        import dataclasses
        A = implied_productivity(fig1a_params)
        prod = dataclasses.replace(fig1a_params.production, A=A)
        cons = derived_constants(fig1a_params)
        assert production(prod, cons.K0, cons.E0) == pytest.approx(
            2 * fig1a_params.production.Y0, rel=1e-12)

    def test_deterministic(self, fig1a_params):
        assert derived_constants(fig1a_params) == derived_constants(fig1a_params)
        assert coefficients(fig1a_params) == coefficients(fig1a_params)


class TestCoefficients:
    def test_fig2_values(self, fig2_params):
        co = coefficients(fig2_params)
        assert co.CL == pytest.approx(-0.13625, abs=1e-15)
        assert co.CS == pytest.approx(0.107, abs=1e-15)
        assert co.CQ == pytest.approx(0.01, abs=1e-15)
        assert co.CC == pytest.approx(0.24765625, abs=1e-12)

    def test_fig1_low_zeta_values(self, fig1b_params):
        co = coefficients(fig1b_params)
        assert co.CL == pytest.approx(-0.02, abs=1e-15)
        assert co.CS == pytest.approx(0.1025, abs=1e-15)
        assert co.CQ == pytest.approx(0.01, abs=1e-15)
        assert co.CC == pytest.approx(0.3075, abs=1e-12)

    def test_fig3_values(self, fig3_params):
        co = coefficients(fig3_params)
        assert co.CL == pytest.approx(0.49, abs=1e-15)
        assert co.CS == pytest.approx(0.0125, abs=1e-15)
        assert co.CQ == pytest.approx(0.01, abs=1e-15)
        assert co.CC == pytest.approx(-0.2625, abs=1e-12)

    def test_quadratic_coefficient_two_routes(self):
        # d1/zeta is exactly representable here, so both routes agree bit for bit
        params = make_model_params(d1=0.5, zeta=0.25, g2=0.01)
        co = coefficients(params)
        zeta, Y_s, g2 = 0.25, 0.5 / 0.25, 0.01
        assert co.CS == zeta * Y_s / 2 - g2
        assert co.CQ == zeta / 2

    def test_quadratic_coefficient_random(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            params = sample_model_params(rng, require_baseline=False)
            co = coefficients(params)
            en = params.energy
            via_ys = en.zeta * (en.d1 / en.zeta) / 2 - params.eigen.g2
            assert co.CS == pytest.approx(via_ys, rel=1e-14, abs=1e-16)


class TestEigendynamics:
    def test_saturation_point(self):
        eig = EigenParams(g1=0.05, g2=0.01)
        assert eigendynamics(eig, Y0=3.0, Y=3.0) == 0.0

    def test_cold_start(self):
        eig = EigenParams(g1=0.05, g2=0.01)
        assert eigendynamics(eig, Y0=3.0, Y=0.0) == pytest.approx(0.15)

    def test_hand_value(self):
        eig = EigenParams(g1=0.05, g2=0.01)
        assert eigendynamics(eig, Y0=3.0, Y=1.0) == pytest.approx(0.12)


class TestDissipation:
    def test_zero_production(self):
        en = EnergyParams(q=0.5, c=0.6, d1=0.225, zeta=0.02)
        assert dissipation_gamma_E(en, 0.0) == 0.6

    def test_hand_value(self):
        en = EnergyParams(q=0.5, c=0.6, d1=0.225, zeta=0.02)
        assert dissipation_gamma_E(en, 3.0) == pytest.approx(0.78)

    def test_even_in_production(self):
        en = EnergyParams(q=0.5, c=0.6, d1=0.225, zeta=0.02)
        for Y in (-5.0, -1.3, 0.7, 2.0):
            assert dissipation_gamma_E(en, Y) == dissipation_gamma_E(en, -Y)
