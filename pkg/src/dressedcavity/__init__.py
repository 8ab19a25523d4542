"""Weakly driven cavity coupled to a strongly dressed two-level emitter.

The package solves the emptying and filling of a single cavity mode whose
coherent drive interferes with the light scattered by a laser-dressed
emitter. It exposes the dressed-frame rates, the closed six-moment
dynamics, closed-form steady-state results at zero cavity detuning, a
brute-force density-matrix oracle on a truncated Fock space, figure-style
parameter sweeps, and an HTTP service plus CLI wrapping all of it.
"""

from .analytic import (
    InterferenceSplit,
    QuadraticCoefficients,
    coefficients,
    decomposition,
    eps_min_bound,
    limit_form,
    n_quadratic,
)
from .dressing import DressedFrame, dress, rz_steady
from .errors import (
    DegenerateDressing,
    DomainError,
    NegativeRate,
    NoConvergence,
    NonFiniteState,
    NonPositiveKappa,
    SingularCavity,
    SolverError,
    TruncationBreached,
    TruncationTooLarge,
    UsageError,
    ZeroRelaxation,
)
from .moments import (
    MomentState,
    MomentTrajectory,
    evolve,
    ground_state,
    moment_rhs,
    steady_state,
    steady_state_linear,
    system_matrix,
)
from .oracle import (
    HilbertSpace,
    OracleSample,
    OracleTrajectory,
    build_h0,
    build_h_full,
    build_space,
    evolve_rho,
    expectations,
    lindblad_rhs,
    operators,
    steady_rho,
    write_trajectory_csv,
)
from .params import (
    PARAM_FIELDS,
    RegimeReport,
    SystemParams,
    build_params,
    load_config,
    regime_check,
    validate,
)
from .sweeps import (
    AxisSpec,
    ClosureReport,
    FigurePreset,
    MinimumReport,
    ScanReport,
    SweepSpec,
    closure_csv,
    closure_report,
    figure_presets,
    find_minimum,
    oracle_check,
    oracle_check_params,
    run_sweep,
    secular_scan_csv,
    secular_scan_report,
)

__version__ = "0.1.0"

__all__ = [
    "AxisSpec",
    "ClosureReport",
    "DegenerateDressing",
    "DomainError",
    "DressedFrame",
    "FigurePreset",
    "HilbertSpace",
    "InterferenceSplit",
    "MinimumReport",
    "MomentState",
    "MomentTrajectory",
    "NegativeRate",
    "NoConvergence",
    "NonFiniteState",
    "NonPositiveKappa",
    "OracleSample",
    "OracleTrajectory",
    "PARAM_FIELDS",
    "QuadraticCoefficients",
    "RegimeReport",
    "ScanReport",
    "SingularCavity",
    "SolverError",
    "SweepSpec",
    "SystemParams",
    "TruncationBreached",
    "TruncationTooLarge",
    "UsageError",
    "ZeroRelaxation",
    "build_h0",
    "build_h_full",
    "build_params",
    "build_space",
    "closure_csv",
    "closure_report",
    "coefficients",
    "decomposition",
    "dress",
    "eps_min_bound",
    "evolve",
    "evolve_rho",
    "expectations",
    "figure_presets",
    "find_minimum",
    "ground_state",
    "lindblad_rhs",
    "limit_form",
    "load_config",
    "moment_rhs",
    "n_quadratic",
    "operators",
    "oracle_check",
    "oracle_check_params",
    "regime_check",
    "run_sweep",
    "rz_steady",
    "secular_scan_csv",
    "secular_scan_report",
    "steady_rho",
    "steady_state",
    "steady_state_linear",
    "system_matrix",
    "validate",
    "write_trajectory_csv",
]
