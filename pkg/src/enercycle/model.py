"""Parameter types and closed-form quantities of the capital-energy growth model.

Production combines capital K and a depletable resource ("energy") E through a
Cobb-Douglas surface sitting on top of a baseline output Y0.  Capital grows from
reinvested output and depreciates; energy is resupplied at a constant rate and
dissipated faster the harder production changes.  Everything in this module is a
pure function of immutable parameter records; the vector fields built from these
quantities live in :mod:`enercycle.fields`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields as _dc_fields


class ParamError(ValueError):
    """Parameter set violates a construction-time invariant."""


class DegenerateParamError(ParamError):
    """Parameters admit no positive baseline energy level (E0 undefined)."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


@dataclass(frozen=True)
class ProductionParams:
    """Cobb-Douglas production surface over effective capital and energy.

    A: total factor productivity, a_K/a_E: input elasticities (must sum to 1),
    Y0: baseline output sustained with zero effective inputs, K_f/E_f: floor
    values keeping the stock variables positive.
    """

    A: float
    a_K: float
    a_E: float
    Y0: float
    K_f: float = 0.0
    E_f: float = 0.0

    def __post_init__(self) -> None:
        _require(self.A > 0, f"productivity A must be > 0, got {self.A}")
        _require(self.a_K > 0 and self.a_E > 0, "elasticities must be positive")
        _require(abs(self.a_K + self.a_E - 1.0) <= 1e-12,
                 f"elasticities must sum to 1, got {self.a_K + self.a_E}")
        _require(self.Y0 > 0, f"baseline output Y0 must be > 0, got {self.Y0}")
        _require(self.K_f >= 0 and self.E_f >= 0, "floor values must be >= 0")


@dataclass(frozen=True)
class CapitalParams:
    """Savings rate s (share of output reinvested) and depreciation rate kappa."""

    s: float
    kappa: float

    def __post_init__(self) -> None:
        _require(0 < self.s < 1, f"savings rate must be in (0,1), got {self.s}")
        _require(self.kappa > 0, f"depreciation rate must be > 0, got {self.kappa}")


@dataclass(frozen=True)
class EnergyParams:
    """Energy resupply and dissipation.

    q: constant supply rate, c: plain dissipation rate, d1: linear coupling of
    production to energy uptake, zeta: inefficiency of converting energy into
    production changes (quadratic dissipation).  The saturation level of the
    coupling is Y_s = d1/zeta; zeta may be zero only if d1 is also zero.
    """

    q: float
    c: float
    d1: float
    zeta: float

    def __post_init__(self) -> None:
        _require(self.q >= 0, f"supply rate q must be >= 0, got {self.q}")
        _require(self.c > 0, f"dissipation rate c must be > 0, got {self.c}")
        _require(self.d1 >= 0, f"coupling d1 must be >= 0, got {self.d1}")
        _require(self.zeta >= 0, f"inefficiency zeta must be >= 0, got {self.zeta}")
        if self.d1 > 0:
            _require(self.zeta > 0,
                     "zeta must be > 0 when d1 > 0 (saturation level d1/zeta must be finite)")

    @property
    def Y_s(self) -> float:
        """Saturation output level d1/zeta (0 when the coupling is switched off)."""
        if self.zeta > 0:
            return self.d1 / self.zeta
        return 0.0


@dataclass(frozen=True)
class EigenParams:
    """Self-contained production growth: cold-start rate g1, amplification rate g2."""

    g1: float
    g2: float

    def __post_init__(self) -> None:
        _require(self.g1 >= 0 and self.g2 >= 0, "g1 and g2 must be >= 0")
        _require(self.g1 > 0 or self.g2 > 0, "g1 and g2 must not both be zero")


@dataclass(frozen=True)
class TimeScales:
    """Relative speeds of the capital (eps_K) and energy (eps_E) dynamics."""

    eps_K: float
    eps_E: float

    def __post_init__(self) -> None:
        _require(self.eps_K >= 0 and self.eps_E >= 0, "time-scale factors must be >= 0")


# Control parameters adjustable through sweeps/bisection: name -> (section, field).
CONTROL_PARAMS: dict[str, tuple[str, str]] = {
    "eps_K": ("scales", "eps_K"),
    "eps_E": ("scales", "eps_E"),
    "zeta": ("energy", "zeta"),
    "d1": ("energy", "d1"),
    "q": ("energy", "q"),
    "c": ("energy", "c"),
    "g1": ("eigen", "g1"),
    "g2": ("eigen", "g2"),
    "s": ("capital", "s"),
    "kappa": ("capital", "kappa"),
}


@dataclass(frozen=True)
class ModelParams:
    """Full parameter record of the production-capital-energy model."""

    production: ProductionParams
    capital: CapitalParams
    energy: EnergyParams
    eigen: EigenParams
    scales: TimeScales

    def with_control(self, name: str, value: float) -> "ModelParams":
        """Return a copy with one control parameter replaced (revalidates)."""
        try:
            section_name, field = CONTROL_PARAMS[name]
        except KeyError:
            raise ParamError(f"unknown control parameter {name!r}; "
                             f"expected one of {sorted(CONTROL_PARAMS)}") from None
        section = getattr(self, section_name)
        kwargs = {f.name: getattr(section, f.name) for f in _dc_fields(section)}
        kwargs[field] = value
        return ModelParams(**{**{f.name: getattr(self, f.name) for f in _dc_fields(self)},
                              section_name: type(section)(**kwargs)})


@dataclass(frozen=True)
class SolowParams:
    """Neoclassical benchmark: per-capita capital dynamics with labor growth r."""

    A: float
    alpha: float
    s: float
    r: float
    kappa: float

    def __post_init__(self) -> None:
        _require(self.A > 0, f"productivity A must be > 0, got {self.A}")
        _require(0 < self.alpha < 1, f"labor elasticity must be in (0,1), got {self.alpha}")
        _require(0 < self.s < 1, f"savings rate must be in (0,1), got {self.s}")
        _require(self.r + self.kappa > 0, "effective decay r + kappa must be > 0")


@dataclass(frozen=True)
class VdPParams:
    """Van der Pol oscillator in Lienard form; omega is the single control knob."""

    omega: float

    def __post_init__(self) -> None:
        _require(math.isfinite(self.omega), "omega must be finite")
        _require(self.omega != 0, "omega must be nonzero")


@dataclass(frozen=True)
class State3:
    """Instantaneous production Y, capital stock K and energy stock E."""

    Y: float
    K: float
    E: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.Y, self.K, self.E)


@dataclass(frozen=True)
class Coefficients:
    """Compact coefficients of the cubic production dynamics.

    dY/dt = CL*Y + CS*Y^2 - CQ*Y^3 + CC - kappa^2/(2s) * (K - K_f)
    """

    CL: float
    CS: float
    CQ: float
    CC: float


@dataclass(frozen=True)
class DerivedConstants:
    """Baseline levels implied by a parameter set.

    Y_s: saturation output of the energy coupling; K0/E0: capital and energy
    levels sustaining the baseline output Y0; E_Q: energy level with production
    switched off; A_squared: squared productivity consistent with the baseline.
    """

    Y_s: float
    K0: float
    E0: float
    E_Q: float
    A_squared: float


def production(params: ProductionParams, K: float, E: float) -> float:
    """Output per unit time for capital stock K and energy stock E."""
    K_eff = K - params.K_f
    E_eff = E - params.E_f
    if K_eff < 0:
        raise ValueError(f"capital {K} below floor {params.K_f}")
    if E_eff < 0:
        raise ValueError(f"energy {E} below floor {params.E_f}")
    return params.Y0 + params.A * K_eff ** params.a_K * E_eff ** params.a_E


def production_partials(params: ProductionParams, K: float, E: float) -> tuple[float, float]:
    """Marginal products (dY/dK, dY/dE) of the above-baseline output.

    Exact for any elasticities: dY/dK = a_K * Y_eff / K_eff and likewise for E,
    where Y_eff is the output in excess of the baseline.  Singular on the floors.
    """
    K_eff = K - params.K_f
    E_eff = E - params.E_f
    if K_eff <= 0:
        raise ValueError(f"capital {K} must be above floor {params.K_f} (marginal product singular)")
    if E_eff <= 0:
        raise ValueError(f"energy {E} must be above floor {params.E_f} (marginal product singular)")
    Y_eff = params.A * K_eff ** params.a_K * E_eff ** params.a_E
    return (params.a_K * Y_eff / K_eff, params.a_E * Y_eff / E_eff)


def eigendynamics(params: EigenParams, Y0: float, Y: float) -> float:
    """Output growth without capital/energy input; saturates at the baseline Y0."""
    return params.g1 * (Y0 - Y) + params.g2 * Y * (Y0 - Y)


def dissipation_gamma_E(params: EnergyParams, Y: float) -> float:
    """Generalized energy dissipation rate c + zeta*Y^2 (even in Y)."""
    return params.c + params.zeta * Y * Y


def baseline_denominator(params: ModelParams) -> float:
    """Effective energy dissipation at the baseline: c - Y0*(d1 - zeta*Y0).

    Must be positive for the baseline energy level E0 to exist.
    """
    en = params.energy
    Y0 = params.production.Y0
    return en.c - Y0 * (en.d1 - en.zeta * Y0)


def derived_constants(params: ModelParams) -> DerivedConstants:
    """Baseline levels (K0, E0, ...) implied by the parameters.

    Raises DegenerateParamError when the baseline energy level is undefined,
    i.e. when the effective dissipation at Y0 is not positive.
    """
    en = params.energy
    cap = params.capital
    Y0 = params.production.Y0
    den = baseline_denominator(params)
    if den <= 0:
        raise DegenerateParamError(
            f"effective energy dissipation at the baseline is {den} <= 0; "
            "no positive baseline energy level exists for these parameters")
    Y_s = en.Y_s if en.zeta > 0 else (math.inf if en.d1 > 0 else 0.0)
    return DerivedConstants(
        Y_s=Y_s,
        K0=params.production.K_f + (cap.s / cap.kappa) * Y0,
        E0=params.production.E_f + en.q / den,
        E_Q=params.production.E_f + en.q / en.c,
        A_squared=(Y0 * cap.kappa) / (cap.s * en.q) * den if en.q > 0 else math.nan,
    )


def implied_productivity(params: ModelParams) -> float:
    """Productivity A placing the baseline point (Y0, K0, E0) on the production surface."""
    return math.sqrt(derived_constants(params).A_squared)


def coefficients(params: ModelParams) -> Coefficients:
    """Compact coefficients of the cubic production dynamics.

    CS is computed from d1 directly (d1/2 - g2), which equals zeta*Y_s/2 - g2
    without the intermediate division.
    """
    en = params.energy
    cap = params.capital
    eig = params.eigen
    Y0 = params.production.Y0
    return Coefficients(
        CL=(cap.kappa - en.c) / 2 - eig.g1 + eig.g2 * Y0,
        CS=en.d1 / 2 - eig.g2,
        CQ=en.zeta / 2,
        CC=Y0 * (eig.g1 + en.c / 2 - (Y0 / 2) * (en.d1 - en.zeta * Y0)),
    )
