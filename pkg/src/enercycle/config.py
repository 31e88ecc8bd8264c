"""Run configurations: JSON schema, validation and bundled example configs.

A config file selects a vector field, supplies the matching parameter family,
and optionally an initial state, integrator settings, a sweep section, a
kaldor section and output options.  The parameter sections mirror the
parameter dataclasses one-to-one, e.g. for the main model:

    {
      "field": "full3",
      "model": {
        "production": {"A": 1.0, "a_K": 0.5, "a_E": 0.5, "Y0": 3.0,
                       "K_f": 0.0, "E_f": 0.0},
        "capital":    {"s": 0.8, "kappa": 0.6},
        "energy":     {"q": 0.5, "c": 0.6, "d1": 0.225, "zeta": 0.04},
        "eigen":      {"g1": 0.05, "g2": 0.01},
        "scales":     {"eps_K": 0.5, "eps_E": 1.0}
      },
      "initial_state": [3.3, 4.0, 1.75],
      "integrator": {"t_end": 2000.0},
      "output": {"formats": ["csv", "json", "svg"]}
    }

Bundled example configs (fig1a, fig1b, fig2, fig3, solow) can be referenced
by name wherever a config path is accepted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .fields import FIELDS, get_field
from .integrate import IntegratorSettings
from .model import (CapitalParams, EigenParams, EnergyParams, ModelParams,
                    ParamError, ProductionParams, SolowParams, TimeScales,
                    VdPParams)

FORMATS = ("csv", "json", "svg")
SWEEP_CONTROLS = ("eps_K", "zeta", "d1")
OUTPUT_DIR_ENV = "ENERCYCLE_OUT"


class ConfigError(ValueError):
    """Configuration file is invalid."""


@dataclass(frozen=True)
class SweepSpec:
    control: str
    min: float
    max: float
    n: int
    with_cycles: bool = False


@dataclass(frozen=True)
class KaldorSpec:
    variants: tuple[str, ...]
    k_values: tuple[float, ...]
    y_min: float | None = None
    y_max: float | None = None
    n_points: int = 201


@dataclass(frozen=True)
class OutputSpec:
    directory: str | None = None
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    name: str
    field_name: str
    model: ModelParams | SolowParams | VdPParams
    integrator: IntegratorSettings
    initial_state: tuple[float, ...] | None
    sweep: SweepSpec | None
    kaldor: KaldorSpec | None
    output: OutputSpec
    bisect: dict | None = None


def builtin_names() -> list[str]:
    """Names of the bundled example configs."""
    pkg = resources.files(__package__) / "configs"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_config(path_or_name: str | Path) -> RunConfig:
    """Load a config from a JSON file path or a bundled config name."""
    path = Path(path_or_name)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        source = str(path)
    else:
        candidate = resources.files(__package__) / "configs" / f"{path_or_name}.json"
        if not str(path_or_name).replace("-", "").replace("_", "").isalnum() \
                or not candidate.is_file():
            raise ConfigError(f"config {path_or_name!r} is neither a file nor one of "
                              f"the bundled configs {builtin_names()}")
        text = candidate.read_text(encoding="utf-8")
        source = f"builtin:{path_or_name}"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: not valid JSON: {exc}") from exc
    return parse_config(data, source)


def _require_keys(data: dict, allowed: set[str], context: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"{context}: unknown keys {sorted(unknown)} "
                          f"(allowed: {sorted(allowed)})")


def _section(data: dict, key: str, context: str) -> dict:
    value = data.get(key)
    if not isinstance(value, dict):
        raise ConfigError(f"{context}: section {key!r} must be an object")
    return value


def _floats(data: dict, cls, context: str):
    fields = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
    _require_keys(data, fields, context)
    try:
        return cls(**{k: float(v) for k, v in data.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def parse_model_params(data: dict, context: str = "model") -> ModelParams:
    _require_keys(data, {"production", "capital", "energy", "eigen", "scales"}, context)
    try:
        return ModelParams(
            production=_floats(_section(data, "production", context), ProductionParams,
                               f"{context}.production"),
            capital=_floats(_section(data, "capital", context), CapitalParams,
                            f"{context}.capital"),
            energy=_floats(_section(data, "energy", context), EnergyParams,
                           f"{context}.energy"),
            eigen=_floats(_section(data, "eigen", context), EigenParams,
                          f"{context}.eigen"),
            scales=_floats(_section(data, "scales", context), TimeScales,
                           f"{context}.scales"),
        )
    except ParamError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def parse_config(data: dict, source: str = "<config>") -> RunConfig:
    """Validate a parsed JSON object and build a RunConfig."""
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be an object")
    _require_keys(data, {"name", "field", "model", "integrator", "initial_state",
                         "sweep", "kaldor", "output", "bisect"}, source)
    field_name = data.get("field")
    if field_name not in FIELDS:
        raise ConfigError(f"{source}: 'field' must be one of {sorted(FIELDS)}, "
                          f"got {field_name!r}")
    field = get_field(field_name)

    model_data = _section(data, "model", source)
    try:
        if field.family == "model":
            model = parse_model_params(model_data, f"{source}.model")
        elif field.family == "solow":
            model = _floats(model_data, SolowParams, f"{source}.model")
        else:
            model = _floats(model_data, VdPParams, f"{source}.model")
    except ParamError as exc:
        raise ConfigError(f"{source}.model: {exc}") from exc

    integ_data = data.get("integrator") or {}
    if not isinstance(integ_data, dict):
        raise ConfigError(f"{source}: 'integrator' must be an object")
    allowed = {f for f in IntegratorSettings.__dataclass_fields__}
    _require_keys(integ_data, allowed, f"{source}.integrator")
    try:
        integrator = IntegratorSettings(**integ_data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}.integrator: {exc}") from exc

    initial = data.get("initial_state")
    if initial is not None:
        if not isinstance(initial, (list, tuple)) or len(initial) != field.dimension:
            raise ConfigError(f"{source}: 'initial_state' must be a list of "
                              f"{field.dimension} numbers for field {field_name!r}")
        initial = tuple(float(v) for v in initial)

    sweep = None
    if data.get("sweep") is not None:
        sd = _section(data, "sweep", source)
        _require_keys(sd, {"control", "min", "max", "n", "with_cycles"}, f"{source}.sweep")
        control = sd.get("control")
        if control not in SWEEP_CONTROLS:
            raise ConfigError(f"{source}.sweep: control must be one of {SWEEP_CONTROLS}, "
                              f"got {control!r}")
        try:
            sweep = SweepSpec(control=control, min=float(sd["min"]), max=float(sd["max"]),
                              n=int(sd["n"]), with_cycles=bool(sd.get("with_cycles", False)))
        except KeyError as exc:
            raise ConfigError(f"{source}.sweep: missing key {exc}") from exc
        if sweep.n < 2 or not sweep.min < sweep.max:
            raise ConfigError(f"{source}.sweep: need n >= 2 and min < max")

    kaldor = None
    if data.get("kaldor") is not None:
        kd = _section(data, "kaldor", source)
        _require_keys(kd, {"variants", "K", "y_min", "y_max", "n"}, f"{source}.kaldor")
        variants = tuple(kd.get("variants", ("symmetric", "linear-saving", "uneven")))
        for v in variants:
            if v not in ("symmetric", "linear-saving", "uneven"):
                raise ConfigError(f"{source}.kaldor: unknown variant {v!r}")
        raw_k = kd.get("K", None)
        if raw_k is None:
            raise ConfigError(f"{source}.kaldor: 'K' (capital level or list) is required")
        k_values = tuple(float(v) for v in (raw_k if isinstance(raw_k, list) else [raw_k]))
        kaldor = KaldorSpec(
            variants=variants, k_values=k_values,
            y_min=None if kd.get("y_min") is None else float(kd["y_min"]),
            y_max=None if kd.get("y_max") is None else float(kd["y_max"]),
            n_points=int(kd.get("n", 201)),
        )
        if kaldor.n_points < 2:
            raise ConfigError(f"{source}.kaldor: n must be >= 2")

    out_data = data.get("output") or {}
    if not isinstance(out_data, dict):
        raise ConfigError(f"{source}: 'output' must be an object")
    _require_keys(out_data, {"directory", "formats"}, f"{source}.output")
    formats = tuple(out_data.get("formats", ("csv", "json")))
    for f in formats:
        if f not in FORMATS:
            raise ConfigError(f"{source}.output: unknown format {f!r}; "
                              f"allowed: {FORMATS}")
    output = OutputSpec(directory=out_data.get("directory"), formats=formats)

    bisect = data.get("bisect")
    if bisect is not None and not isinstance(bisect, dict):
        raise ConfigError(f"{source}: 'bisect' must be an object")

    return RunConfig(
        name=str(data.get("name", source)),
        field_name=field_name,
        model=model,
        integrator=integrator,
        initial_state=initial,
        sweep=sweep,
        kaldor=kaldor,
        output=output,
        bisect=bisect,
    )


def config_to_dict(config: RunConfig) -> dict:
    """Inverse of parse_config, for embedding the config in result summaries."""
    import dataclasses

    data: dict = {
        "name": config.name,
        "field": config.field_name,
        "model": dataclasses.asdict(config.model),
        "integrator": dataclasses.asdict(config.integrator),
        "output": {"directory": config.output.directory,
                   "formats": list(config.output.formats)},
    }
    if config.initial_state is not None:
        data["initial_state"] = list(config.initial_state)
    if config.sweep is not None:
        data["sweep"] = {"control": config.sweep.control, "min": config.sweep.min,
                         "max": config.sweep.max, "n": config.sweep.n,
                         "with_cycles": config.sweep.with_cycles}
    if config.kaldor is not None:
        data["kaldor"] = {"variants": list(config.kaldor.variants),
                          "K": list(config.kaldor.k_values),
                          "y_min": config.kaldor.y_min, "y_max": config.kaldor.y_max,
                          "n": config.kaldor.n_points}
    if config.bisect is not None:
        data["bisect"] = config.bisect
    return data
