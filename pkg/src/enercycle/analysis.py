"""Fixed points, stability, limit-cycle measurement and bifurcation sweeps.

The two-variable production-capital system has a cubic equilibrium condition
whose one analytically guaranteed root is the baseline output Y0; fixed points
are found by deflating the cubic with that root and solving the remaining
quadratic in closed form.  Eigenvalues come from characteristic polynomials
(quadratic/cubic closed forms), never from an iterative eigensolver.  Limit
cycles are measured on the post-transient trajectory with a Poincare section
through the tail mean of production.
"""

from __future__ import annotations

import concurrent.futures
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cubic import deflate, solve_cubic, solve_quadratic
from .fields import VectorField, get_field
from .integrate import DivergenceError, IntegratorSettings, integrate
from .model import (ModelParams, ParamError, SolowParams, coefficients,
                    derived_constants)

CLASS_TOL = 1e-9
DEFLATION_WARN = 1e-8

STABLE_NODE = "stable-node"
STABLE_FOCUS = "stable-focus"
UNSTABLE_NODE = "unstable-node"
UNSTABLE_FOCUS = "unstable-focus"
SADDLE = "saddle"
CENTER_MARGINAL = "center-marginal"

BRANCHES = ("lower", "middle", "upper")

ANALYTIC_BISECT_TOL = 1e-5
CYCLE_BISECT_TOL = 1e-3

# Relative slack when judging "agrees within 1%" for cycle periods/amplitudes.
CYCLE_REL_TOL = 0.01
CYCLE_MIN_INTERVALS = 5
# Tail oscillations smaller than this (relative to max(1, |mean|)) are treated
# as numerical remnants of a converging trajectory, not as a cycle.
CYCLE_AMPLITUDE_FLOOR = 1e-3


class BracketingError(ValueError):
    """The bisection criterion does not change across the given bracket."""


@dataclass(frozen=True)
class FixedPoint:
    """An equilibrium with its eigenvalues, stability class and branch tag."""

    state: tuple[float, ...]
    eigenvalues: tuple[complex, ...]
    classification: str
    branch: str

    @property
    def Y(self) -> float:
        return self.state[0]


@dataclass(frozen=True)
class CycleInfo:
    """Measured limit-cycle properties of the production variable.

    phase_durations orders the four business-cycle phases as
    (boom, recession, depression, recovery).
    """

    period: float
    y_min: float
    y_max: float
    y_mean: float
    phase_durations: tuple[float, float, float, float]
    n_cycles: int

    @property
    def phase_ratio(self) -> float:
        return max(self.phase_durations) / min(self.phase_durations)


@dataclass
class BifurcationRow:
    """Fixed points (and optionally a cycle) at one control-parameter value."""

    control_name: str
    control_value: float
    fixed_points: list[FixedPoint]
    cycle: CycleInfo | None = None
    error: str | None = None


@dataclass(frozen=True)
class BisectResult:
    control_name: str
    criterion: str
    value: float
    bracket: tuple[float, float]
    iterations: int


@dataclass(frozen=True)
class SolowStatics:
    k_star: float
    y_star: float
    c_star: float
    s_gold: float
    k_gold: float


def classify_eigenvalues(eigenvalues, tol: float = CLASS_TOL) -> str:
    """Map eigenvalues to a stability class.

    Any real part within +-tol makes the point center-marginal; mixed signs
    make a saddle (in 2D this coincides with a negative Jacobian determinant);
    otherwise stable/unstable, with focus when an imaginary part is present.
    """
    re = [ev.real for ev in eigenvalues]
    im = [ev.imag for ev in eigenvalues]
    if any(abs(r) <= tol for r in re):
        return CENTER_MARGINAL
    if all(r < 0 for r in re):
        return STABLE_FOCUS if any(abs(v) > tol for v in im) else STABLE_NODE
    if all(r > 0 for r in re):
        return UNSTABLE_FOCUS if any(abs(v) > tol for v in im) else UNSTABLE_NODE
    return SADDLE


def eig2(J: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from its characteristic quadratic."""
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    return solve_quadratic(1.0, -tr, det)


def eig3(J: np.ndarray) -> tuple[complex, complex, complex]:
    """Eigenvalues of a 3x3 matrix from its characteristic cubic (closed form)."""
    tr = J[0, 0] + J[1, 1] + J[2, 2]
    m2 = (J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
          + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
          + J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
    det = (J[0, 0] * (J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
           - J[0, 1] * (J[1, 0] * J[2, 2] - J[1, 2] * J[2, 0])
           + J[0, 2] * (J[1, 0] * J[2, 1] - J[1, 1] * J[2, 0]))
    return solve_cubic(1.0, -tr, m2, -det)


def equilibrium_cubic(params: ModelParams) -> list[float]:
    """Descending coefficients of the 2D equilibrium condition in Y.

    Setting both time derivatives of the coupled production-capital system to
    zero and eliminating K leaves
        -CQ*Y^3 + CS*Y^2 + (CL - kappa/2)*Y + CC = 0,
    which always has the baseline output Y0 among its roots.
    """
    co = coefficients(params)
    return [-co.CQ, co.CS, co.CL - params.capital.kappa / 2.0, co.CC]


def deflated_quadratic(params: ModelParams) -> tuple[list[float], float]:
    """Quadratic left after dividing the equilibrium cubic by (Y - Y0).

    Returns (coefficients, residual); the residual is the cubic evaluated at
    Y0 and is analytically zero.
    """
    return deflate(equilibrium_cubic(params), params.production.Y0)


def jacobian_2d(params: ModelParams, Y: float) -> np.ndarray:
    """Jacobian of the coupled production-capital system at production level Y."""
    co = coefficients(params)
    cap = params.capital
    eps_K = params.scales.eps_K
    return np.array([
        [co.CL + 2.0 * co.CS * Y - 3.0 * co.CQ * Y * Y, -cap.kappa ** 2 / (2.0 * cap.s)],
        [eps_K * cap.s, -eps_K * cap.kappa],
    ])


def jacobian_3d(params: ModelParams, state) -> np.ndarray:
    """Jacobian of the fully coupled three-variable system at (Y, K, E)."""
    Y, K, E = state
    co = coefficients(params)
    cap, en, sc = params.capital, params.energy, params.scales
    E_eff = E - params.production.E_f
    if E_eff <= 0:
        raise ValueError(f"energy {E} must be above the floor {params.production.E_f}")
    return np.array([
        [co.CL + en.q / (2.0 * E_eff) + 2.0 * co.CS * Y - 3.0 * co.CQ * Y * Y,
         -cap.kappa ** 2 / (2.0 * cap.s),
         -Y * en.q / (2.0 * E_eff * E_eff)],
        [sc.eps_K * cap.s, -sc.eps_K * cap.kappa, 0.0],
        [sc.eps_E * E_eff * (en.d1 - 2.0 * en.zeta * Y), 0.0,
         -sc.eps_E * (en.c - en.d1 * Y + en.zeta * Y * Y)],
    ])


def _branch_tags(n: int) -> list[str]:
    if n == 3:
        return list(BRANCHES)
    if n == 2:
        return ["lower", "upper"]
    return ["lower"]


def fixed_points_2d(params: ModelParams) -> list[FixedPoint]:
    """All real equilibria of the coupled production-capital system, sorted by Y.

    The cubic is deflated by the guaranteed root Y0; if the deflation residual
    is suspiciously large a warning is issued and a general closed-form cubic
    solve is used instead.
    """
    cubic = equilibrium_cubic(params)
    Y0 = params.production.Y0
    scale = max(abs(c) for c in cubic)
    quad, residual = deflate(cubic, Y0)
    ys: list[float]
    if abs(residual) > DEFLATION_WARN * scale:
        warnings.warn(
            f"deflation residual {residual:.3g} exceeds {DEFLATION_WARN:g} of the "
            "leading coefficient scale; falling back to a general cubic solve",
            RuntimeWarning, stacklevel=2)
        roots = (solve_cubic(*cubic) if abs(cubic[0]) > 1e-300 * scale
                 else solve_quadratic(*cubic[1:]))
        ys = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
    else:
        ys = [Y0]
        if abs(quad[0]) > 1e-300 * scale:  # genuine cubic
            r1, r2 = solve_quadratic(*quad)
            if abs(r1.imag) == 0.0:
                ys.extend([r1.real, r2.real])
        elif abs(quad[1]) > 0:  # zeta = 0 collapses the cubic to a quadratic
            ys.append(-quad[2] / quad[1])
    # collapse numerically equal roots (tangencies)
    ys.sort()
    uniq: list[float] = []
    for y in ys:
        if not uniq or abs(y - uniq[-1]) > 1e-9 * max(1.0, abs(y)):
            uniq.append(y)
    cap = params.capital
    K_f = params.production.K_f
    tags = _branch_tags(len(uniq))
    points = []
    for tag, y in zip(tags, uniq):
        eigs = eig2(jacobian_2d(params, y))
        points.append(FixedPoint(
            state=(y, K_f + cap.s / cap.kappa * y),
            eigenvalues=eigs,
            classification=classify_eigenvalues(eigs),
            branch=tag,
        ))
    return points


def fixed_point_3d(params: ModelParams) -> FixedPoint:
    """The baseline equilibrium (Y0, K0, E0) of the full system with its eigenvalues."""
    cons = derived_constants(params)
    Y0 = params.production.Y0
    state = (Y0, cons.K0, cons.E0)
    eigs = eig3(jacobian_3d(params, state))
    return FixedPoint(state=state, eigenvalues=eigs,
                      classification=classify_eigenvalues(eigs), branch="lower")


def standard_initial_states(field: VectorField, params: ModelParams) -> list[np.ndarray]:
    """Default initial conditions used when hunting for limit cycles.

    Production is started at 1.1*Y0, 0.5*Y0 and Y0+2 with the other variables
    at their baseline levels.
    """
    Y0 = params.production.Y0
    ys = (1.1 * Y0, 0.5 * Y0, Y0 + 2.0)
    cap = params.capital
    K0 = params.production.K_f + cap.s / cap.kappa * Y0
    if field.name in ("reduced-yk-qs", "reduced-yk-coupled"):
        return [np.array([y, K0]) for y in ys]
    E0 = derived_constants(params).E0
    if field.name == "reduced-ye":
        return [np.array([y, E0]) for y in ys]
    if field.name == "full3":
        return [np.array([y, K0, E0]) for y in ys]
    raise ValueError(f"no standard initial states for field {field.name!r}")


def _parabolic_vertex(t: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    """Refine an extremum at sample i through the parabola of its neighbours."""
    if i == 0 or i == len(t) - 1:
        return float(t[i]), float(y[i])
    t0, t1, t2 = t[i - 1], t[i], t[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = (t1 - t0) * (y1 - y2) - (t1 - t2) * (y1 - y0)
    if denom == 0:
        return float(t1), float(y1)
    tv = t1 - 0.5 * ((t1 - t0) ** 2 * (y1 - y2) - (t1 - t2) ** 2 * (y1 - y0)) / denom
    if not (min(t0, t2) <= tv <= max(t0, t2)):
        return float(t1), float(y1)
    # quadratic through the three points evaluated at the vertex
    l0 = (tv - t1) * (tv - t2) / ((t0 - t1) * (t0 - t2))
    l1 = (tv - t0) * (tv - t2) / ((t1 - t0) * (t1 - t2))
    l2 = (tv - t0) * (tv - t1) / ((t2 - t0) * (t2 - t1))
    return float(tv), float(y0 * l0 + y1 * l1 + y2 * l2)


def _crossings(t: np.ndarray, y: np.ndarray, level: float, upward: bool) -> list[float]:
    out = []
    for i in range(len(t) - 1):
        if upward and y[i] < level <= y[i + 1] or not upward and y[i] >= level > y[i + 1]:
            frac = (level - y[i]) / (y[i + 1] - y[i])
            out.append(float(t[i] + frac * (t[i + 1] - t[i])))
    return out


def measure_cycle(times: np.ndarray, values: np.ndarray) -> CycleInfo | None:
    """Measure a limit cycle from a post-transient scalar time series.

    A Poincare section is taken at the tail mean; a cycle is reported when at
    least five successive upward-crossing intervals agree within 1% and the
    per-cycle extrema do too.  Returns None when no such cycle is present.
    """
    if len(times) < 8:
        return None
    duration = times[-1] - times[0]
    if duration <= 0:
        return None
    mean = float(np.trapezoid(values, times) / duration)
    amplitude = float(values.max() - values.min())
    if amplitude < CYCLE_AMPLITUDE_FLOOR * max(1.0, abs(mean)):
        return None
    ups = _crossings(times, values, mean, upward=True)
    if len(ups) < CYCLE_MIN_INTERVALS + 1:
        return None
    ups_arr = np.array(ups[-(CYCLE_MIN_INTERVALS + 1):])
    intervals = np.diff(ups_arr)
    period = float(intervals.mean())
    if np.max(np.abs(intervals - period)) > CYCLE_REL_TOL * period:
        return None

    maxima, minima, phases = [], [], []
    for a, b in zip(ups_arr[:-1], ups_arr[1:]):
        seg = (times >= a) & (times <= b)
        ts, ys = times[seg], values[seg]
        if len(ts) < 4:
            return None
        t_max, y_max = _parabolic_vertex(ts, ys, int(np.argmax(ys)))
        t_min, y_min = _parabolic_vertex(ts, ys, int(np.argmin(ys)))
        downs = _crossings(ts, ys, mean, upward=False)
        if not downs or not (a <= t_max <= t_min <= b):
            return None
        t_down = downs[0]
        maxima.append(y_max)
        minima.append(y_min)
        phases.append((t_max - a, t_down - t_max, t_min - t_down, b - t_min))
    amp = float(np.mean(maxima) - np.mean(minima))
    if amp <= 0:
        return None
    if (np.max(np.abs(np.diff(maxima))) > CYCLE_REL_TOL * amp
            or np.max(np.abs(np.diff(minima))) > CYCLE_REL_TOL * amp):
        return None
    span = (times >= ups_arr[0]) & (times <= ups_arr[-1])
    y_mean = float(np.trapezoid(values[span], times[span]) / (ups_arr[-1] - ups_arr[0]))
    mean_phases = tuple(float(np.mean([p[i] for p in phases])) for i in range(4))
    return CycleInfo(period=period, y_min=float(np.mean(minima)),
                     y_max=float(np.mean(maxima)), y_mean=y_mean,
                     phase_durations=mean_phases, n_cycles=len(intervals))


def detect_limit_cycle(field: VectorField | str, params: object, initial=None,
                       settings: IntegratorSettings | None = None) -> CycleInfo | None:
    """Integrate past the transient and measure a limit cycle of the first state.

    With initial=None the standard initial-state set is tried in order and the
    first detected cycle wins.  Absence of a cycle returns None, never raises.
    """
    if isinstance(field, str):
        field = get_field(field)
    if field.dimension < 2:
        raise ValueError("cycle detection requires a field of dimension >= 2")
    settings = settings or IntegratorSettings()
    if initial is not None:
        candidates = [np.asarray(initial, dtype=float)]
    else:
        candidates = standard_initial_states(field, params)  # type: ignore[arg-type]
    for y0 in candidates:
        try:
            traj = integrate(field, y0, params, settings)
        except DivergenceError:
            continue
        t_tail, y_tail = traj.tail()
        info = measure_cycle(t_tail, y_tail[:, 0])
        if info is not None:
            return info
    return None


def _trace_at_branch(params: ModelParams, branch: str) -> float:
    points = fixed_points_2d(params)
    by_tag = {p.branch: p for p in points}
    if branch not in by_tag:
        raise ParamError(f"no {branch!r} fixed point at these parameters "
                         f"(found {sorted(by_tag)})")
    J = jacobian_2d(params, by_tag[branch].Y)
    return float(J[0, 0] + J[1, 1])


def _quadratic_discriminant(params: ModelParams) -> float:
    quad, _ = deflated_quadratic(params)
    a, b, c = quad
    if a == 0:
        raise ParamError("equilibrium condition is not cubic (zeta = 0); "
                         "saddle-node criterion undefined")
    return b * b - 4.0 * a * c


def bisect_threshold(params: ModelParams, control_name: str, bracket, criterion: str,
                     branch: str = "lower",
                     settings: IntegratorSettings | None = None) -> BisectResult:
    """Locate a critical control value by bisection.

    criterion is one of "trace-zero" (Jacobian trace at the given branch
    changes sign: a focus gaining/losing stability), "saddle-node" (the
    deflated quadratic's discriminant changes sign: fixed points appearing or
    vanishing), or "cycle-exists" (a limit cycle from the standard initial
    states appears/disappears; located more coarsely).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")

    if criterion == "trace-zero":
        def probe(v: float) -> float:
            return _trace_at_branch(params.with_control(control_name, v), branch)
        tol = ANALYTIC_BISECT_TOL
    elif criterion == "saddle-node":
        def probe(v: float) -> float:
            return _quadratic_discriminant(params.with_control(control_name, v))
        tol = ANALYTIC_BISECT_TOL
    elif criterion == "cycle-exists":
        def probe(v: float) -> float:
            cycle = detect_limit_cycle("reduced-yk-coupled",
                                       params.with_control(control_name, v),
                                       settings=settings)
            return 1.0 if cycle is not None else -1.0
        tol = CYCLE_BISECT_TOL
    else:
        raise ValueError(f"unknown criterion {criterion!r}; expected "
                         "'trace-zero', 'saddle-node' or 'cycle-exists'")

    f_lo, f_hi = probe(lo), probe(hi)
    if f_lo == 0.0:
        return BisectResult(control_name, criterion, lo, (lo, hi), 0)
    if f_hi == 0.0:
        return BisectResult(control_name, criterion, hi, (lo, hi), 0)
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketingError(
            f"criterion {criterion!r} does not change across [{lo}, {hi}] "
            f"(values {f_lo:.6g} and {f_hi:.6g})")
    iterations = 0
    a, b, f_a = lo, hi, f_lo
    while b - a > tol:
        mid = 0.5 * (a + b)
        f_mid = probe(mid)
        iterations += 1
        if f_mid == 0.0:
            a = b = mid
            break
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_a):
            a, f_a = mid, f_mid
        else:
            b = mid
        if iterations > 200:
            break
    return BisectResult(control_name, criterion, 0.5 * (a + b), (lo, hi), iterations)


def _retag_for_continuity(rows: list[BifurcationRow]) -> None:
    """Re-tag branches in sparse rows by nearest-Y matching with the previous row."""
    prev: list[FixedPoint] | None = None
    for row in rows:
        if row.error is not None or not row.fixed_points:
            continue
        if prev and len(row.fixed_points) < 3:
            retagged = []
            for fp in row.fixed_points:
                nearest = min(prev, key=lambda p: abs(p.Y - fp.Y))
                retagged.append(FixedPoint(fp.state, fp.eigenvalues,
                                           fp.classification, nearest.branch))
            row.fixed_points = retagged
        prev = row.fixed_points


def sweep(params: ModelParams, control_name: str, values, with_cycles: bool = False,
          settings: IntegratorSettings | None = None, threads: int = 1) -> list[BifurcationRow]:
    """One-parameter bifurcation sweep of the coupled production-capital system.

    For each control value the fixed points are located and classified; with
    with_cycles=True a limit-cycle search from the standard initial states is
    run as well.  Rows are returned in control-value order; degenerate
    parameter values are recorded as row errors, not raised.
    """
    values = [float(v) for v in values]
    if len(values) < 2:
        raise ValueError("a sweep needs at least two control values")

    def compute(v: float) -> BifurcationRow:
        try:
            local = params.with_control(control_name, v)
            points = fixed_points_2d(local)
        except ParamError as exc:
            return BifurcationRow(control_name, v, [], error=str(exc))
        cycle = None
        if with_cycles:
            cycle = detect_limit_cycle("reduced-yk-coupled", local, settings=settings)
        return BifurcationRow(control_name, v, points, cycle=cycle)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(compute, values))
    else:
        rows = [compute(v) for v in values]
    _retag_for_continuity(rows)
    return rows


def solow_statics(params: SolowParams) -> SolowStatics:
    """Steady state and golden-rule quantities of the per-capita benchmark."""
    decay = params.r + params.kappa
    k_star = (params.s * params.A / decay) ** (1.0 / params.alpha)
    y_star = params.A * k_star ** (1.0 - params.alpha)
    return SolowStatics(
        k_star=k_star,
        y_star=y_star,
        c_star=(1.0 - params.s) * y_star,
        s_gold=1.0 - params.alpha,
        k_gold=((1.0 - params.alpha) * params.A / decay) ** (1.0 / params.alpha),
    )


def write_bifurcation_csv(rows: list[BifurcationRow], path) -> None:
    """Write sweep rows as CSV, one line per fixed point.

    Cycle columns are repeated on every line of a control value that has a
    detected cycle and left empty otherwise; degenerate rows carry the error
    message in the class column.
    """
    header = ("control,value,branch,Y_star,K_star,re_lambda1,im_lambda1,"
              "re_lambda2,im_lambda2,class,cycle_period,cycle_ymin,cycle_ymax,cycle_ymean")
    fmt = lambda v: format(v, ".17g")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            if row.error is not None:
                cells = [row.control_name, fmt(row.control_value)] + [""] * 7 \
                    + ["degenerate: " + row.error.replace(",", ";")] + [""] * 4
                fh.write(",".join(cells) + "\n")
                continue
            cyc = ("", "", "", "")
            if row.cycle is not None:
                cyc = (fmt(row.cycle.period), fmt(row.cycle.y_min),
                       fmt(row.cycle.y_max), fmt(row.cycle.y_mean))
            for fp in row.fixed_points:
                l1, l2 = fp.eigenvalues
                fh.write(",".join([
                    row.control_name, fmt(row.control_value), fp.branch,
                    fmt(fp.state[0]), fmt(fp.state[1]),
                    fmt(l1.real), fmt(l1.imag), fmt(l2.real), fmt(l2.imag),
                    fp.classification, *cyc,
                ]) + "\n")
