"""Simulation and bifurcation analysis of a capital-energy growth model.

Production runs on capital and a depletable energy resource; depending on time
scales and the energy coupling, the economy settles on its baseline, locks
into a high-production state, or cycles endogenously through boom, recession,
depression and recovery.  The package provides the model's vector fields,
numerical integration, fixed-point/stability/bifurcation analysis, Kaldor-style
investment/saving decompositions and a data-emitting CLI.
"""

from .model import (
    CapitalParams,
    Coefficients,
    DegenerateParamError,
    DerivedConstants,
    EigenParams,
    EnergyParams,
    ModelParams,
    ParamError,
    ProductionParams,
    SolowParams,
    State3,
    TimeScales,
    VdPParams,
    baseline_denominator,
    coefficients,
    derived_constants,
    dissipation_gamma_E,
    eigendynamics,
    implied_productivity,
    production,
    production_partials,
)
from .fields import (
    FIELDS,
    FloorSingularError,
    VectorField,
    get_field,
    rhs_full3,
    rhs_reduced_ye,
    rhs_reduced_yk_coupled,
    rhs_reduced_yk_qs,
    rhs_solow,
    rhs_vdp,
)
from .integrate import (
    AttractorResult,
    DivergenceError,
    FloorViolationError,
    IntegratorSettings,
    Trajectory,
    integrate,
    integrate_to_attractor,
    write_trajectory_csv,
)
from .analysis import (
    BifurcationRow,
    BisectResult,
    BracketingError,
    CycleInfo,
    FixedPoint,
    SolowStatics,
    bisect_threshold,
    classify_eigenvalues,
    detect_limit_cycle,
    eig2,
    eig3,
    fixed_point_3d,
    fixed_points_2d,
    jacobian_2d,
    jacobian_3d,
    measure_cycle,
    solow_statics,
    standard_initial_states,
    sweep,
    write_bifurcation_csv,
)
from .kaldor import (
    ISPoint,
    RequirementReport,
    VARIANTS,
    check_kaldor_requirements,
    split,
    split_arrays,
    vdp_kaldor_map,
    write_is_csv,
)
from .config import ConfigError, RunConfig, builtin_names, load_config

__version__ = "0.1.0"
