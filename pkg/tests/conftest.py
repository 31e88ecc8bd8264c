"""Shared parameter fixtures and the random valid-parameter sampler."""

from __future__ import annotations

import numpy as np
import pytest

from enercycle import (CapitalParams, EigenParams, EnergyParams, ModelParams,
                       ProductionParams, SolowParams, TimeScales,
                       baseline_denominator)


def make_model_params(*, A=1.0, a_K=0.5, a_E=0.5, Y0=3.0, K_f=0.0, E_f=0.0,
                      s=0.8, kappa=0.6, q=0.5, c=0.6, d1=0.225, zeta=0.04,
                      g1=0.05, g2=0.01, eps_K=0.5, eps_E=1.0) -> ModelParams:
    return ModelParams(
        production=ProductionParams(A=A, a_K=a_K, a_E=a_E, Y0=Y0, K_f=K_f, E_f=E_f),
        capital=CapitalParams(s=s, kappa=kappa),
        energy=EnergyParams(q=q, c=c, d1=d1, zeta=zeta),
        eigen=EigenParams(g1=g1, g2=g2),
        scales=TimeScales(eps_K=eps_K, eps_E=eps_E),
    )


@pytest.fixture
def fig1a_params() -> ModelParams:
    """Strongly dissipative setting: trajectories converge to the baseline."""
    return make_model_params(zeta=0.04)


@pytest.fixture
def fig1b_params() -> ModelParams:
    """Weakly dissipative setting: a sustained business cycle."""
    return make_model_params(zeta=0.02)


@pytest.fixture
def fig2_params() -> ModelParams:
    """Three-equilibria setting used for the bifurcation analysis."""
    return make_model_params(Y0=1.25, s=0.8, kappa=0.36, q=1.0, c=0.06,
                             d1=0.22, zeta=0.02, g1=0.29, g2=0.003,
                             eps_K=0.06, eps_E=1.0)


@pytest.fixture
def fig3_params() -> ModelParams:
    """Setting used for the investment/saving decompositions."""
    return make_model_params(Y0=3.0, s=0.8, kappa=0.7, q=1.0, c=0.3,
                             d1=0.225, zeta=0.02, g1=0.01, g2=0.1,
                             eps_K=0.06, eps_E=1.0)


@pytest.fixture
def solow_params() -> SolowParams:
    return SolowParams(A=1.0, alpha=0.5, s=0.2, r=0.01, kappa=0.04)


def sample_model_params(rng: np.random.Generator, require_baseline: bool = True) -> ModelParams:
    """Draw one random valid parameter set.

    With require_baseline=True, rejection-sample until the baseline energy
    level exists (positive effective dissipation at Y0).
    """
    for _ in range(1000):
        params = make_model_params(
            A=rng.uniform(0.2, 3.0),
            Y0=rng.uniform(0.5, 5.0),
            K_f=rng.uniform(0.0, 2.0),
            E_f=rng.uniform(0.0, 2.0),
            s=rng.uniform(0.1, 0.9),
            kappa=rng.uniform(0.1, 1.0),
            q=rng.uniform(0.1, 2.0),
            c=rng.uniform(0.1, 1.5),
            d1=rng.uniform(0.0, 0.4),
            zeta=rng.uniform(0.005, 0.1),
            g1=rng.uniform(0.0, 0.5),
            g2=rng.uniform(0.001, 0.2),
            eps_K=rng.uniform(0.01, 2.0),
            eps_E=rng.uniform(0.01, 2.0),
        )
        if not require_baseline or baseline_denominator(params) > 0:
            return params
    raise AssertionError("could not sample valid parameters")
