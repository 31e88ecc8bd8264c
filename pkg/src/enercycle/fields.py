"""Right-hand sides of every dynamical system in the toolkit.

Each system is registered as a named :class:`VectorField` so the integrator,
the analysis layer and the CLI can select it by string key:

    full3               production, capital and energy fully coupled
    reduced-ye          capital quasi-stationary; production and energy
    reduced-yk-qs       energy quasi-stationary; production and capital
    reduced-yk-coupled  energy eliminated through the production surface
    solow               neoclassical per-capita capital benchmark
    vdp                 Van der Pol oscillator in Lienard form

All fields are autonomous; the time argument is accepted and ignored.
Production may go negative during deep depressions and is never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ModelParams, ParamError, SolowParams, VdPParams, coefficients


class FloorSingularError(ValueError):
    """State reached the energy floor where the dynamics is singular."""


RHS = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class VectorField:
    """A named autonomous vector field with its parameter family and state labels."""

    name: str
    dimension: int
    state_names: tuple[str, ...]
    family: str  # "model" | "solow" | "vdp"
    _maker: Callable[[object], RHS]
    floor_index: int | None = None  # state index guarded against its singular floor

    def bind(self, params: object) -> RHS:
        """Validate params for this field and return a fast rhs(t, y) closure."""
        self._check_family(params)
        return self._maker(params)

    def rhs(self, t: float, y: object, params: object) -> np.ndarray:
        """One-off evaluation; prefer bind() inside loops."""
        return self.bind(params)(t, np.asarray(y, dtype=float))

    def floor_value(self, params: object) -> float | None:
        if self.floor_index is None:
            return None
        return params.production.E_f  # type: ignore[union-attr]

    def _check_family(self, params: object) -> None:
        expected = {"model": ModelParams, "solow": SolowParams, "vdp": VdPParams}.get(self.family)
        if expected is None:  # ad-hoc fields (tests, experiments) skip validation
            return
        if not isinstance(params, expected):
            raise ParamError(f"field {self.name!r} requires {expected.__name__}, "
                             f"got {type(params).__name__}")
        if self.family == "model" and params.production.a_K != 0.5:
            # The derived dynamics hardcodes square-root marginal products.
            raise ParamError("model vector fields require elasticities a_K = a_E = 1/2, "
                             f"got a_K={params.production.a_K}")


def _model_floats(p: ModelParams):
    co = coefficients(p)
    cap, en, eig, pr = p.capital, p.energy, p.eigen, p.production
    return co, cap.s, cap.kappa, en.q, en.c, en.d1, en.zeta, eig.g1, eig.g2, \
        pr.Y0, pr.K_f, pr.E_f, p.scales.eps_K, p.scales.eps_E


def _make_full3(p: ModelParams) -> RHS:
    co, s, kappa, q, c, d1, zeta, g1, g2, Y0, K_f, E_f, eps_K, eps_E = _model_floats(p)
    half_q = 0.5 * q
    lin = 0.5 * (kappa - c) - g1 + g2 * Y0
    cap_pull = kappa * kappa / (2.0 * s)
    g1Y0 = g1 * Y0

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        Y, K, E = y
        E_eff = E - E_f
        if E_eff <= 0.0:
            raise FloorSingularError(f"energy {E} at or below floor {E_f}")
        K_eff = K - K_f
        dY = Y * (lin + half_q / E_eff) + co.CS * Y * Y - co.CQ * Y ** 3 \
            - cap_pull * K_eff + g1Y0
        dK = eps_K * (s * Y - kappa * K_eff)
        dE = eps_E * (q - E_eff * (c - d1 * Y + zeta * Y * Y))
        return np.array([dY, dK, dE])

    return rhs


def _make_reduced_ye(p: ModelParams) -> RHS:
    co, s, kappa, q, c, d1, zeta, g1, g2, Y0, K_f, E_f, eps_K, eps_E = _model_floats(p)
    half_q = 0.5 * q
    lin = -0.5 * c - g1 + g2 * Y0
    g1Y0 = g1 * Y0

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        Y, E = y
        E_eff = E - E_f
        if E_eff <= 0.0:
            raise FloorSingularError(f"energy {E} at or below floor {E_f}")
        dY = Y * (lin + half_q / E_eff) + co.CS * Y * Y - co.CQ * Y ** 3 + g1Y0
        dE = eps_E * (q - E_eff * (c - d1 * Y + zeta * Y * Y))
        return np.array([dY, dE])

    return rhs


def _make_reduced_yk_qs(p: ModelParams) -> RHS:
    co, s, kappa, q, c, d1, zeta, g1, g2, Y0, K_f, E_f, eps_K, eps_E = _model_floats(p)
    cap_pull = kappa * kappa / (2.0 * s)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        Y, K = y
        K_eff = K - K_f
        dY = g1 * (Y0 - Y) + g2 * Y * (Y0 - Y) + 0.5 * kappa * Y - cap_pull * K_eff
        dK = eps_K * (s * Y - kappa * K_eff)
        return np.array([dY, dK])

    return rhs


def _make_reduced_yk_coupled(p: ModelParams) -> RHS:
    co, s, kappa, q, c, d1, zeta, g1, g2, Y0, K_f, E_f, eps_K, eps_E = _model_floats(p)
    cap_pull = kappa * kappa / (2.0 * s)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        Y, K = y
        K_eff = K - K_f
        dY = co.CL * Y + co.CS * Y * Y - co.CQ * Y ** 3 + co.CC - cap_pull * K_eff
        dK = eps_K * (s * Y - kappa * K_eff)
        return np.array([dY, dK])

    return rhs


def _make_solow(p: SolowParams) -> RHS:
    beta = 1.0 - p.alpha
    decay = p.r + p.kappa
    sA = p.s * p.A

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        k = y[0]
        if k < 0:
            raise ValueError(f"capital per capita must be >= 0, got {k}")
        return np.array([sA * k ** beta - decay * k])

    return rhs


def _make_vdp(p: VdPParams) -> RHS:
    om = p.omega

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        yy, x = y
        return np.array([om * (yy - yy ** 3 / 3.0 - x), yy / om])

    return rhs


FIELDS: dict[str, VectorField] = {
    f.name: f for f in (
        VectorField("full3", 3, ("Y", "K", "E"), "model", _make_full3, floor_index=2),
        VectorField("reduced-ye", 2, ("Y", "E"), "model", _make_reduced_ye, floor_index=1),
        VectorField("reduced-yk-qs", 2, ("Y", "K"), "model", _make_reduced_yk_qs),
        VectorField("reduced-yk-coupled", 2, ("Y", "K"), "model", _make_reduced_yk_coupled),
        VectorField("solow", 1, ("k",), "solow", _make_solow),
        VectorField("vdp", 2, ("y", "x"), "vdp", _make_vdp),
    )
}


def get_field(name: str) -> VectorField:
    try:
        return FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown vector field {name!r}; "
                         f"expected one of {sorted(FIELDS)}") from None


def rhs_full3(state, params: ModelParams) -> np.ndarray:
    """(dY/dt, dK/dt, dE/dt) of the fully coupled three-variable system."""
    return get_field("full3").rhs(0.0, state, params)


def rhs_reduced_ye(state, params: ModelParams) -> np.ndarray:
    """(dY/dt, dE/dt) with capital replaced by its quasi-stationary level."""
    return get_field("reduced-ye").rhs(0.0, state, params)


def rhs_reduced_yk_qs(state, params: ModelParams) -> np.ndarray:
    """(dY/dt, dK/dt) with energy replaced by its quasi-stationary level."""
    return get_field("reduced-yk-qs").rhs(0.0, state, params)


def rhs_reduced_yk_coupled(state, params: ModelParams) -> np.ndarray:
    """(dY/dt, dK/dt) with energy eliminated through the production surface."""
    return get_field("reduced-yk-coupled").rhs(0.0, state, params)


def rhs_solow(state, params: SolowParams) -> np.ndarray:
    """dk/dt of the per-capita capital benchmark."""
    return get_field("solow").rhs(0.0, state, params)


def rhs_vdp(state, params: VdPParams) -> np.ndarray:
    """(dy/dt, dx/dt) of the Van der Pol oscillator in Lienard form."""
    return get_field("vdp").rhs(0.0, state, params)
