"""Investment/saving decompositions of the production dynamics.

The cubic production dynamics dY/dt can be split into an investment function
I(Y,K) and a saving function S(Y,K) with dY/dt = I - S in the spirit of
Kaldor's trade-cycle model.  The split is underdetermined; three candidate
variants are provided together with numerical checks of Kaldor's qualitative
requirements (both functions increasing in Y, and moving against each other
in K).  A mapping from the Van der Pol oscillator to the same I/S form is
included for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, coefficients

VARIANTS = ("symmetric", "linear-saving", "uneven")

# Secant slopes less negative than this fraction of the largest slope magnitude
# still count as monotone: "increasing" is judged at plot resolution, not as a
# strict sign condition on every sample.
MONOTONE_REL_TOL = 0.01


@dataclass(frozen=True)
class ISPoint:
    """Investment and saving evaluated at one (Y, K) state."""

    Y: float
    K: float
    I: float
    S: float


@dataclass(frozen=True)
class RequirementReport:
    """Kaldor's qualitative requirements evaluated for one split variant.

    Monotonicity is checked in Y over the sampled range at the reference K;
    the movement test compares each function between a low and a high capital
    level (investment must fall with K, saving must rise).
    """

    variant: str
    i_monotone_in_y: bool
    s_monotone_in_y: bool
    i_decreasing_in_k: bool
    s_increasing_in_k: bool
    i_depends_on_k: bool
    s_depends_on_k: bool

    @property
    def passes(self) -> bool:
        return (self.i_monotone_in_y and self.s_monotone_in_y
                and self.i_decreasing_in_k and self.s_increasing_in_k
                and self.i_depends_on_k and self.s_depends_on_k)


def _check_variant(kind: str) -> None:
    if kind not in VARIANTS:
        raise ValueError(f"unknown split variant {kind!r}; expected one of {VARIANTS}")


def split_arrays(kind: str, params: ModelParams, Y, K) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized investment and saving for a split variant.

    All variants reconstruct the production dynamics exactly: I - S equals
    CL*Y + CS*Y^2 - CQ*Y^3 + CC - kappa^2/(2s)*(K - K_f) for every (Y, K).
    """
    _check_variant(kind)
    co = coefficients(params)
    cap = params.capital
    Y = np.asarray(Y, dtype=float)
    K_eff = np.asarray(K, dtype=float) - params.production.K_f
    cap_pull = cap.kappa ** 2 / (2.0 * cap.s)
    if kind == "symmetric":
        I = 0.5 * (co.CL * Y + co.CS * Y ** 2 - co.CQ * Y ** 3 + co.CC - cap_pull * K_eff)
        return I, -I
    if kind == "linear-saving":
        I = co.CS * Y ** 2 - co.CQ * Y ** 3 - cap_pull * K_eff
        S = -co.CL * Y - co.CC * np.ones_like(Y)
        return I, S
    I = (co.CL * Y + 0.2 * co.CS * Y ** 2 - 0.25 * co.CQ * Y ** 3
         + 0.5 * co.CC - 0.5 * cap_pull * K_eff)
    S = (-0.8 * co.CS * Y ** 2 + 0.75 * co.CQ * Y ** 3
         - 0.5 * co.CC + 0.5 * cap_pull * K_eff)
    return I, S


def split(kind: str, params: ModelParams, Y: float, K: float) -> ISPoint:
    """Investment and saving at one state for a split variant."""
    I, S = split_arrays(kind, params, Y, K)
    return ISPoint(Y=float(Y), K=float(K), I=float(I), S=float(S))


def _monotone_increasing(y: np.ndarray, f: np.ndarray) -> bool:
    slopes = np.diff(f) / np.diff(y)
    floor = -MONOTONE_REL_TOL * float(np.max(np.abs(slopes)))
    return bool(np.all(slopes >= floor))


def check_kaldor_requirements(kind: str, params: ModelParams, y_values=None,
                              k_ref: float | None = None,
                              k_low: float | None = None,
                              k_high: float | None = None) -> RequirementReport:
    """Evaluate Kaldor's requirements for a split variant on a sampled grid.

    y_values defaults to 201 points over [0, 2*Y0]; k_ref defaults to the
    baseline capital level, with the movement test between 0.5*k_ref and
    1.5*k_ref unless explicit levels are given.
    """
    _check_variant(kind)
    if y_values is None:
        y_values = np.linspace(0.0, 2.0 * params.production.Y0, 201)
    y = np.asarray(y_values, dtype=float)
    if k_ref is None:
        cap = params.capital
        k_ref = params.production.K_f + cap.s / cap.kappa * params.production.Y0
    if k_low is None:
        k_low = 0.5 * k_ref
    if k_high is None:
        k_high = 1.5 * k_ref
    if not k_low < k_high:
        raise ValueError(f"k_low must be below k_high, got {k_low} >= {k_high}")

    I_ref, S_ref = split_arrays(kind, params, y, k_ref)
    I_lo, S_lo = split_arrays(kind, params, y, k_low)
    I_hi, S_hi = split_arrays(kind, params, y, k_high)
    dI = I_hi - I_lo
    dS = S_hi - S_lo
    return RequirementReport(
        variant=kind,
        i_monotone_in_y=_monotone_increasing(y, I_ref),
        s_monotone_in_y=_monotone_increasing(y, S_ref),
        i_decreasing_in_k=bool(np.all(dI < 0)),
        s_increasing_in_k=bool(np.all(dS > 0)),
        i_depends_on_k=bool(np.any(dI != 0)),
        s_depends_on_k=bool(np.any(dS != 0)),
    )


def vdp_kaldor_map(omega: float, Y: float, K: float) -> ISPoint:
    """Investment/saving reading of the Van der Pol oscillator.

    With capital identified with the oscillator's slow variable and no
    depreciation, dK/dt = I = Y/omega and I - S = (dY/dt)/omega.  Saving is
    affine in K with unit slope while investment ignores K entirely, which is
    what disqualifies the oscillator as an economically sensible split.
    """
    if omega == 0:
        raise ZeroDivisionError("omega must be nonzero")
    I = Y / omega
    S = (1.0 - omega) / omega * Y + Y ** 3 / 3.0 + K
    return ISPoint(Y=float(Y), K=float(K), I=float(I), S=float(S))


def write_is_csv(path, params: ModelParams, variants=VARIANTS, k_values=(None,),
                 y_values=None) -> None:
    """Write I/S curves as CSV blocks: header "Y,I,S,variant,K", one block per K."""
    if y_values is None:
        y_values = np.linspace(0.0, 2.0 * params.production.Y0, 201)
    y = np.asarray(y_values, dtype=float)
    fmt = lambda v: format(v, ".17g")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("Y,I,S,variant,K\n")
        for kind in variants:
            for K in k_values:
                if K is None:
                    cap = params.capital
                    K = params.production.K_f + cap.s / cap.kappa * params.production.Y0
                I, S = split_arrays(kind, params, y, K)
                for yi, ii, si in zip(y, I, S):
                    fh.write(f"{fmt(yi)},{fmt(ii)},{fmt(si)},{kind},{fmt(K)}\n")
