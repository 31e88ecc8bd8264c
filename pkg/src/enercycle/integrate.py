"""Time integration of the cataloged vector fields.

Two steppers: classic fixed-step RK4 and an adaptive embedded
Runge-Kutta-Fehlberg 4(5) pair.  Both refuse to step the energy state onto its
singular floor: a proposed step that would land at or below the floor is
retried at half the step size rather than clamped, so no spurious dynamics is
introduced.  Trajectories record the sample times, states and a reproducibility
digest of everything that produced them.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .fields import FloorSingularError, VectorField, get_field

DIVERGENCE_LIMIT = 1e12
MAX_FLOOR_HALVINGS = 40

# Butcher tableau of the Fehlberg 4(5) pair.
_A2 = (0.25,)
_A3 = (3 / 32, 9 / 32)
_A4 = (1932 / 2197, -7200 / 2197, 7296 / 2197)
_A5 = (439 / 216, -8.0, 3680 / 513, -845 / 4104)
_A6 = (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40)
_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
_STAGE_TIMES = (0.0, 0.25, 3 / 8, 12 / 13, 1.0, 0.5)


class DivergenceError(RuntimeError):
    """A state magnitude exceeded the divergence limit; carries the partial trajectory."""

    def __init__(self, msg: str, trajectory: "Trajectory"):
        super().__init__(msg)
        self.trajectory = trajectory


class FloorViolationError(RuntimeError):
    """Step halving could not keep the guarded state above its floor."""


@dataclass(frozen=True)
class IntegratorSettings:
    """Stepper choice, tolerances, horizon and sampling control.

    transient_cutoff marks the time before which samples count as transient for
    attractor and cycle analysis; None means half the horizon.  max_step caps
    the adaptive step so oscillations are never skipped over.
    """

    method: str = "rk45-adaptive"
    dt: float = 0.01
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    t_end: float = 2000.0
    record_every: int = 1
    transient_cutoff: float | None = None
    max_step: float = 1.0

    def __post_init__(self) -> None:
        if self.method not in ("rk4-fixed", "rk45-adaptive"):
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.dt > 0 and self.t_end > 0):
            raise ValueError("dt and t_end must be positive")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.transient_cutoff is not None and not (0 <= self.transient_cutoff < self.t_end):
            raise ValueError("transient_cutoff must lie within [0, t_end)")

    @property
    def transient(self) -> float:
        return self.transient_cutoff if self.transient_cutoff is not None else 0.5 * self.t_end


@dataclass
class Trajectory:
    """Sampled solution of one integration run."""

    times: np.ndarray
    states: np.ndarray
    field_name: str
    params_digest: str
    transient_cutoff: float
    diverged: bool = False
    t_diverged: float | None = None

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def tail(self) -> tuple[np.ndarray, np.ndarray]:
        """Samples at or after the transient cutoff."""
        mask = self.times >= self.transient_cutoff
        return self.times[mask], self.states[mask]


@dataclass(frozen=True)
class AttractorResult:
    """Tail classification of a trajectory: fixed point, bounded oscillation, or blow-up."""

    kind: str  # "converged" | "cycle" | "divergent"
    point: tuple[float, ...] | None
    trajectory: Trajectory


def params_digest(field_name: str, params: object, initial, settings: IntegratorSettings) -> str:
    """Short stable fingerprint of everything that determines a trajectory."""
    try:
        params_repr: object = dataclasses.asdict(params)  # type: ignore[arg-type]
    except TypeError:
        params_repr = repr(params)
    payload = {
        "field": field_name,
        "params": params_repr,
        "initial": [float(v) for v in np.atleast_1d(initial)],
        "settings": dataclasses.asdict(settings),
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def integrate(field: VectorField | str, initial, params: object,
              settings: IntegratorSettings | None = None) -> Trajectory:
    """Integrate a vector field from an initial state over [0, t_end].

    Parameters
    ----------
    field : VectorField or catalog key
    initial : sequence of floats matching the field dimension
    params : parameter record of the field's family
    settings : IntegratorSettings, defaults applied when None

    Raises DivergenceError when a state magnitude exceeds 1e12 and
    FloorViolationError when the energy floor cannot be respected.
    """
    if isinstance(field, str):
        field = get_field(field)
    settings = settings or IntegratorSettings()
    y0 = np.asarray(initial, dtype=float)
    if y0.shape != (field.dimension,):
        raise ValueError(f"initial state must have shape ({field.dimension},), got {y0.shape}")
    rhs = field.bind(params)
    floor_idx = field.floor_index
    floor_val = field.floor_value(params)
    if floor_idx is not None and y0[floor_idx] <= floor_val:
        raise ValueError(f"initial {field.state_names[floor_idx]}={y0[floor_idx]} "
                         f"must be above the floor {floor_val}")
    digest = params_digest(field.name, params, y0, settings)

    if settings.method == "rk4-fixed":
        times, states, diverged, t_div = _run_rk4(rhs, y0, settings, floor_idx, floor_val)
    else:
        times, states, diverged, t_div = _run_rkf45(rhs, y0, settings, floor_idx, floor_val)

    traj = Trajectory(times=np.array(times), states=np.array(states),
                      field_name=field.name, params_digest=digest,
                      transient_cutoff=settings.transient,
                      diverged=diverged, t_diverged=t_div)
    if diverged:
        raise DivergenceError(f"state magnitude exceeded {DIVERGENCE_LIMIT:g} at t={t_div:g}", traj)
    return traj


def _diverged(y: np.ndarray) -> bool:
    return not np.all(np.isfinite(y)) or float(np.max(np.abs(y))) > DIVERGENCE_LIMIT


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_span(rhs, t, y, h, floor_idx, floor_val, depth=0):
    """Advance by h with recursive halving if the floor would be crossed."""
    try:
        y1 = _rk4_step(rhs, t, y, h)
        hit = floor_idx is not None and y1[floor_idx] <= floor_val
    except FloorSingularError:
        hit = True
    if hit:
        if depth >= MAX_FLOOR_HALVINGS:
            raise FloorViolationError(
                f"could not keep state above the floor within {MAX_FLOOR_HALVINGS} halvings at t={t:g}")
        ya = _rk4_span(rhs, t, y, 0.5 * h, floor_idx, floor_val, depth + 1)
        return _rk4_span(rhs, t + 0.5 * h, ya, 0.5 * h, floor_idx, floor_val, depth + 1)
    return y1


def _run_rk4(rhs, y0, settings, floor_idx, floor_val):
    n_steps = max(1, round(settings.t_end / settings.dt))
    h = settings.t_end / n_steps
    t, y = 0.0, y0.copy()
    times, states = [t], [y.copy()]
    for i in range(n_steps):
        y = _rk4_span(rhs, t, y, h, floor_idx, floor_val)
        t = (i + 1) * h
        if _diverged(y):
            times.append(t)
            states.append(y.copy())
            return times, states, True, t
        if (i + 1) % settings.record_every == 0 or i == n_steps - 1:
            times.append(t)
            states.append(y.copy())
    return times, states, False, None


def _run_rkf45(rhs, y0, settings, floor_idx, floor_val):
    t, y = 0.0, y0.copy()
    h = min(settings.dt, settings.max_step, settings.t_end)
    times, states = [t], [y.copy()]
    accepted = 0
    halvings = 0
    while t < settings.t_end:
        remaining = settings.t_end - t
        if remaining <= 1e-12 * max(1.0, settings.t_end):
            break  # within rounding of the horizon; a last micro-step adds nothing
        h = min(h, settings.max_step, remaining)
        if h < 1e-14 * max(1.0, t):
            if floor_idx is not None \
                    and y[floor_idx] - floor_val <= 1e-9 * max(1.0, abs(floor_val)):
                raise FloorViolationError(
                    f"state pinned at the floor {floor_val} at t={t:g}; "
                    "the dynamics crosses it")
            raise RuntimeError(f"step size underflow at t={t:g}")
        try:
            k1 = rhs(t, y)
            k2 = rhs(t + _STAGE_TIMES[1] * h, y + h * (_A2[0] * k1))
            k3 = rhs(t + _STAGE_TIMES[2] * h, y + h * (_A3[0] * k1 + _A3[1] * k2))
            k4 = rhs(t + _STAGE_TIMES[3] * h, y + h * (_A4[0] * k1 + _A4[1] * k2 + _A4[2] * k3))
            k5 = rhs(t + h, y + h * (_A5[0] * k1 + _A5[1] * k2 + _A5[2] * k3 + _A5[3] * k4))
            k6 = rhs(t + _STAGE_TIMES[5] * h,
                     y + h * (_A6[0] * k1 + _A6[1] * k2 + _A6[2] * k3 + _A6[3] * k4 + _A6[4] * k5))
            y5 = y + h * (_B5[0] * k1 + _B5[2] * k3 + _B5[3] * k4 + _B5[4] * k5 + _B5[5] * k6)
            floor_hit = floor_idx is not None and y5[floor_idx] <= floor_val
        except FloorSingularError:
            floor_hit = True
        if floor_hit:
            halvings += 1
            if halvings > MAX_FLOOR_HALVINGS:
                raise FloorViolationError(
                    f"could not keep state above the floor within {MAX_FLOOR_HALVINGS} halvings at t={t:g}")
            h *= 0.5
            continue
        halvings = 0
        y4 = y + h * (_B4[0] * k1 + _B4[2] * k3 + _B4[3] * k4 + _B4[4] * k5)
        scale = settings.abs_tol + settings.rel_tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale))
        if err <= 1.0:
            t += h
            y = y5
            accepted += 1
            if _diverged(y):
                times.append(t)
                states.append(y.copy())
                return times, states, True, t
            if accepted % settings.record_every == 0 or t >= settings.t_end:
                times.append(t)
                states.append(y.copy())
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= factor
    if times[-1] < t:  # ensure the final state is recorded
        times.append(t)
        states.append(y.copy())
    return times, states, False, None


def integrate_to_attractor(field: VectorField | str, initial, params: object,
                           settings: IntegratorSettings | None = None) -> AttractorResult:
    """Integrate and classify the trajectory tail.

    converged: the state set over the last 10% of the horizon has diameter
    below abs_tol; cycle: bounded but not converged (trajectory handed off for
    cycle measurement); divergent: magnitude blew past the divergence limit.
    """
    settings = settings or IntegratorSettings()
    try:
        traj = integrate(field, initial, params, settings)
    except DivergenceError as exc:
        return AttractorResult(kind="divergent", point=None, trajectory=exc.trajectory)
    mask = traj.times >= 0.9 * settings.t_end
    window = traj.states[mask]
    diameter = float(np.max(window.max(axis=0) - window.min(axis=0)))
    if diameter < settings.abs_tol:
        return AttractorResult(kind="converged",
                               point=tuple(float(v) for v in traj.final_state),
                               trajectory=traj)
    return AttractorResult(kind="cycle", point=None, trajectory=traj)


def write_trajectory_csv(trajectory: Trajectory, path) -> None:
    """Write a trajectory as CSV: header "t,<state names>", full double precision."""
    names = get_field(trajectory.field_name).state_names
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t," + ",".join(names) + "\n")
        for t, row in zip(trajectory.times, trajectory.states):
            fh.write(format(t, ".17g") + ","
                     + ",".join(format(v, ".17g") for v in row) + "\n")
