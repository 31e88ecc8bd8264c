"""Command-line front end.

    enercycle simulate     --config fig1b --out results
    enercycle fixed-points --config fig2
    enercycle sweep        --config fig2 --threads 4
    enercycle kaldor       --config fig3
    enercycle bisect       --config fig2 --criterion trace-zero --control zeta \
                           --bracket 0.01 0.2 --branch lower
    enercycle solow        --config solow

Every command loads a JSON config (path or bundled name), writes CSV/JSON
results into the output directory and, when "svg" is among the requested
formats, renders the matching figure.  The output directory resolves in order:
--out flag, config output.directory, the ENERCYCLE_OUT environment variable,
then "./out".  Exit codes: 0 success, 2 invalid config, 3 divergence,
4 bisection bracket failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, kaldor
from .analysis import BracketingError
from .config import (FORMATS, ConfigError, OUTPUT_DIR_ENV, RunConfig,
                     builtin_names, config_to_dict, load_config)
from .fields import get_field
from .integrate import DivergenceError, integrate_to_attractor, write_trajectory_csv
from .model import (DegenerateParamError, ModelParams, ParamError, SolowParams,
                    baseline_denominator, derived_constants)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_BRACKET = 4


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _derived_summary(params: ModelParams) -> dict:
    """Derived constants with nulls when the baseline energy level is undefined."""
    cap = params.capital
    pr = params.production
    en = params.energy
    out = {
        "Y_s": en.Y_s if en.zeta > 0 else None,
        "K0": pr.K_f + cap.s / cap.kappa * pr.Y0,
        "E_Q": pr.E_f + en.q / en.c,
        "baseline_denominator": baseline_denominator(params),
    }
    try:
        cons = derived_constants(params)
        out.update(E0=cons.E0, A_squared=cons.A_squared, degenerate=False)
    except DegenerateParamError:
        out.update(E0=None, A_squared=None, degenerate=True)
    return out


def _cycle_dict(info: analysis.CycleInfo | None) -> dict | None:
    if info is None:
        return None
    return {
        "period": info.period,
        "y_min": info.y_min,
        "y_max": info.y_max,
        "y_mean": info.y_mean,
        "phase_durations": {
            "boom": info.phase_durations[0],
            "recession": info.phase_durations[1],
            "depression": info.phase_durations[2],
            "recovery": info.phase_durations[3],
        },
        "n_cycles": info.n_cycles,
    }


def _fp_dict(fp: analysis.FixedPoint, names: tuple[str, ...]) -> dict:
    return {
        "state": {n: v for n, v in zip(names, fp.state)},
        "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in fp.eigenvalues],
        "classification": fp.classification,
        "branch": fp.branch,
    }


def _default_initial(config: RunConfig) -> np.ndarray:
    if config.initial_state is not None:
        return np.asarray(config.initial_state, dtype=float)
    model = config.model
    if isinstance(model, SolowParams):
        return np.array([1.0])
    if isinstance(model, ModelParams):
        field = get_field(config.field_name)
        return analysis.standard_initial_states(field, model)[0]
    return np.array([0.5, 0.0])  # vdp


def cmd_simulate(config: RunConfig, outdir: Path, formats: tuple[str, ...],
                 threads: int) -> int:
    field = get_field(config.field_name)
    initial = _default_initial(config)
    try:
        result = integrate_to_attractor(field, initial, config.model, config.integrator)
    except (ValueError, ParamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    traj = result.trajectory
    if result.kind == "divergent":
        if "csv" in formats:
            write_trajectory_csv(traj, outdir / "trajectory.csv")
        print(f"error: trajectory diverged at t={traj.t_diverged:g}", file=sys.stderr)
        return EXIT_DIVERGENCE

    cycle = None
    if result.kind == "cycle":
        t_tail, y_tail = traj.tail()
        cycle = analysis.measure_cycle(t_tail, y_tail[:, 0])

    summary: dict = {
        "config": config_to_dict(config),
        "attractor": result.kind,
        "converged_point": (None if result.point is None
                            else {n: v for n, v in zip(field.state_names, result.point)}),
        "cycle": _cycle_dict(cycle),
        "final_state": {n: float(v) for n, v in zip(field.state_names, traj.final_state)},
        "params_digest": traj.params_digest,
    }
    baselines: dict[str, float] = {}
    if isinstance(config.model, ModelParams):
        summary["derived_constants"] = _derived_summary(config.model)
        d = summary["derived_constants"]
        baselines = {"Y": config.model.production.Y0, "K": d["K0"]}
        if d["E0"] is not None:
            baselines["E"] = d["E0"]
    elif isinstance(config.model, SolowParams):
        statics = analysis.solow_statics(config.model)
        summary["solow_statics"] = dataclasses.asdict(statics)
        baselines = {"k": statics.k_star}

    if "csv" in formats:
        write_trajectory_csv(traj, outdir / "trajectory.csv")
    if "json" in formats:
        _write_json(outdir / "summary.json", summary)
    if "svg" in formats:
        from . import plots
        plots.save_trajectory_figure(outdir / "trajectory.svg", traj.times, traj.states,
                                     field.state_names, baselines, title=config.name)
    return EXIT_OK


def cmd_fixed_points(config: RunConfig, outdir: Path, formats: tuple[str, ...],
                     threads: int) -> int:
    if config.field_name not in ("reduced-yk-coupled", "full3"):
        print("error: fixed-points requires field 'reduced-yk-coupled' or 'full3'",
              file=sys.stderr)
        return EXIT_CONFIG
    assert isinstance(config.model, ModelParams)
    field = get_field(config.field_name)
    try:
        if config.field_name == "full3":
            points = [analysis.fixed_point_3d(config.model)]
        else:
            points = analysis.fixed_points_2d(config.model)
    except DegenerateParamError as exc:
        print(f"error: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if "csv" in formats:
        fmt = lambda v: format(v, ".17g")
        with open(outdir / "fixed_points.csv", "w", encoding="utf-8") as fh:
            fh.write("branch,Y_star,K_star,E_star,re_lambda1,im_lambda1,"
                     "re_lambda2,im_lambda2,re_lambda3,im_lambda3,class\n")
            for fp in points:
                state = list(fp.state) + [""] * (3 - len(fp.state))
                eigs: list[str] = []
                for ev in fp.eigenvalues:
                    eigs += [fmt(ev.real), fmt(ev.imag)]
                eigs += [""] * (6 - len(eigs))
                cells = [fp.branch] + [fmt(v) if v != "" else "" for v in state] \
                    + eigs + [fp.classification]
                fh.write(",".join(cells) + "\n")
    if "json" in formats:
        _write_json(outdir / "fixed_points.json", {
            "config": config_to_dict(config),
            "derived_constants": _derived_summary(config.model),
            "fixed_points": [_fp_dict(fp, field.state_names) for fp in points],
        })
    return EXIT_OK


def cmd_sweep(config: RunConfig, outdir: Path, formats: tuple[str, ...],
              threads: int) -> int:
    if config.sweep is None:
        print("error: config has no 'sweep' section", file=sys.stderr)
        return EXIT_CONFIG
    assert isinstance(config.model, ModelParams)
    spec = config.sweep
    values = np.linspace(spec.min, spec.max, spec.n)
    rows = analysis.sweep(config.model, spec.control, values,
                          with_cycles=spec.with_cycles,
                          settings=config.integrator, threads=threads)
    if "csv" in formats:
        analysis.write_bifurcation_csv(rows, outdir / "bifurcation.csv")
    if "json" in formats:
        _write_json(outdir / "sweep_summary.json", {
            "config": config_to_dict(config),
            "rows": [{
                "control": r.control_name,
                "value": r.control_value,
                "n_fixed_points": len(r.fixed_points),
                "classes": [fp.classification for fp in r.fixed_points],
                "cycle": _cycle_dict(r.cycle),
                "error": r.error,
            } for r in rows],
        })
    if "svg" in formats:
        from . import plots
        plots.save_bifurcation_figure(outdir / "bifurcation.svg", rows, title=config.name)
    return EXIT_OK


def cmd_kaldor(config: RunConfig, outdir: Path, formats: tuple[str, ...],
               threads: int) -> int:
    if not isinstance(config.model, ModelParams):
        print("error: kaldor requires the full model parameter family", file=sys.stderr)
        return EXIT_CONFIG
    if config.kaldor is None:
        print("error: config has no 'kaldor' section", file=sys.stderr)
        return EXIT_CONFIG
    spec = config.kaldor
    y0 = config.model.production.Y0
    y_lo = 0.0 if spec.y_min is None else spec.y_min
    y_hi = 2.0 * y0 if spec.y_max is None else spec.y_max
    y_grid = np.linspace(y_lo, y_hi, spec.n_points)

    reports = []
    curves = []
    for kind in spec.variants:
        for K in spec.k_values:
            I, S = kaldor.split_arrays(kind, config.model, y_grid, K)
            curves.append((kind, K, y_grid, I, S))
        report = kaldor.check_kaldor_requirements(kind, config.model, y_grid,
                                                  k_ref=spec.k_values[0])
        reports.append(dataclasses.asdict(report) | {"passes": report.passes})

    if "csv" in formats:
        kaldor.write_is_csv(outdir / "kaldor_curves.csv", config.model,
                            variants=spec.variants, k_values=spec.k_values,
                            y_values=y_grid)
    if "json" in formats:
        _write_json(outdir / "kaldor_report.json", {
            "config": config_to_dict(config),
            "requirements": reports,
        })
    if "svg" in formats:
        from . import plots
        plots.save_kaldor_figure(outdir / "kaldor.svg", curves, title=config.name)
    return EXIT_OK


def cmd_bisect(config: RunConfig, outdir: Path, formats: tuple[str, ...],
               threads: int, criterion: str | None, control: str | None,
               bracket: tuple[float, float] | None, branch: str) -> int:
    spec = config.bisect or {}
    criterion = criterion or spec.get("criterion")
    control = control or spec.get("control")
    if bracket is None and "bracket" in spec:
        bracket = tuple(spec["bracket"])  # type: ignore[assignment]
    branch = branch or spec.get("branch") or "lower"
    if not criterion or not control or bracket is None:
        print("error: bisect needs --criterion, --control and --bracket "
              "(or a 'bisect' config section)", file=sys.stderr)
        return EXIT_CONFIG
    if not isinstance(config.model, ModelParams):
        print("error: bisect requires the full model parameter family", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = analysis.bisect_threshold(config.model, control, bracket, criterion,
                                           branch=branch, settings=config.integrator)
    except BracketingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except (ValueError, ParamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = {
        "config": config_to_dict(config),
        "criterion": result.criterion,
        "control": result.control_name,
        "branch": branch,
        "bracket": list(result.bracket),
        "critical_value": result.value,
        "iterations": result.iterations,
    }
    _write_json(outdir / "bisect.json", payload)
    print(f"{result.control_name} {result.criterion}: {result.value:.6g}")
    return EXIT_OK


def cmd_solow(config: RunConfig, outdir: Path, formats: tuple[str, ...],
              threads: int) -> int:
    if not isinstance(config.model, SolowParams):
        print("error: solow requires field 'solow' with Solow parameters",
              file=sys.stderr)
        return EXIT_CONFIG
    statics = analysis.solow_statics(config.model)
    if "csv" in formats:
        fmt = lambda v: format(v, ".17g")
        with open(outdir / "solow.csv", "w", encoding="utf-8") as fh:
            fh.write("k_star,y_star,c_star,s_gold,k_gold\n")
            fh.write(",".join(fmt(v) for v in (statics.k_star, statics.y_star,
                                               statics.c_star, statics.s_gold,
                                               statics.k_gold)) + "\n")
    if "json" in formats:
        _write_json(outdir / "solow.json", {
            "config": config_to_dict(config),
            "statics": dataclasses.asdict(statics),
        })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enercycle",
        description="Simulation and bifurcation analysis of a capital-energy "
                    "growth model with endogenous business cycles.")
    parser.add_argument("command",
                        choices=["simulate", "fixed-points", "sweep", "kaldor",
                                 "bisect", "solow"])
    parser.add_argument("--config", required=True,
                        help=f"path to a JSON config or one of {builtin_names()}")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--format", default=None,
                        help="comma-separated subset of csv,json,svg "
                             "(default: from config)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweep rows")
    parser.add_argument("--criterion", default=None,
                        choices=["trace-zero", "saddle-node", "cycle-exists"],
                        help="bisect criterion")
    parser.add_argument("--control", default=None, choices=["eps_K", "zeta", "d1"],
                        help="bisect control parameter")
    parser.add_argument("--bracket", nargs=2, type=float, default=None,
                        metavar=("LO", "HI"), help="bisect bracket")
    parser.add_argument("--branch", default=None,
                        choices=["lower", "middle", "upper"],
                        help="branch for the trace-zero criterion (default: lower)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    formats: tuple[str, ...]
    if args.format is not None:
        formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
        for f in formats:
            if f not in FORMATS:
                print(f"error: unknown format {f!r}; allowed: {FORMATS}", file=sys.stderr)
                return EXIT_CONFIG
    else:
        formats = config.output.formats

    outdir = Path(args.out or config.output.directory
                  or os.environ.get(OUTPUT_DIR_ENV) or "out")
    outdir.mkdir(parents=True, exist_ok=True)

    try:
        if args.command == "simulate":
            return cmd_simulate(config, outdir, formats, args.threads)
        if args.command == "fixed-points":
            return cmd_fixed_points(config, outdir, formats, args.threads)
        if args.command == "sweep":
            return cmd_sweep(config, outdir, formats, args.threads)
        if args.command == "kaldor":
            return cmd_kaldor(config, outdir, formats, args.threads)
        if args.command == "bisect":
            bracket = None if args.bracket is None else (args.bracket[0], args.bracket[1])
            return cmd_bisect(config, outdir, formats, args.threads,
                              args.criterion, args.control, bracket, args.branch)
        return cmd_solow(config, outdir, formats, args.threads)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (ConfigError, ParamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
