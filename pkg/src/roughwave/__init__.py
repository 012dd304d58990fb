"""Monotone finite-volume schemes for 1D scalar conservation laws with
rough (fractional Brownian) initial data: solvers, seeded initial data,
scaling diagnostics and reproducible experiment drivers."""

__version__ = "0.1.0"

from .diagnostics import (
    BoundInputs,
    default_beta,
    fit_rate,
    kuznetsov_bound,
    l1_distance,
    lip_bound_rhs,
    lip_plus,
    sharpness_ratio,
    total_variation,
    tv_time_integral,
)
from .experiments import (
    StudyConfig,
    StudyResult,
    bound_sharpness_study,
    config_from_dict,
    config_to_dict,
    convergence_study,
    lip_scaling_study,
    run_samples_parallel,
    tv_decay_study,
    tv_scaling_study,
)
from .flux import (
    FluxSpec,
    MonotoneReport,
    NumericalFluxSpec,
    NumFluxKind,
    check_monotone,
    engquist_osher_flux,
    flux_deriv,
    flux_value,
    godunov_flux,
    lax_friedrichs_flux,
    max_wave_speed,
    numerical_flux,
    rusanov_flux,
    upwind_flux,
)
from .initial_data import (
    FbmPath,
    SplitMix64,
    fbm_initial_field,
    fbm_midpoint,
    holder_cap,
    midpoint_scale,
    normalize_to_unit,
    sample_seed,
)
from .mesh import CellField, Grid, make_grid, project, restrict
from .solver import (
    Boundary,
    SchemeConfig,
    Snapshot,
    Trajectory,
    cfl_timestep,
    evolve,
    step,
)

__all__ = [
    "__version__",
    "BoundInputs",
    "Boundary",
    "CellField",
    "FbmPath",
    "FluxSpec",
    "Grid",
    "MonotoneReport",
    "NumFluxKind",
    "NumericalFluxSpec",
    "SchemeConfig",
    "Snapshot",
    "SplitMix64",
    "StudyConfig",
    "StudyResult",
    "Trajectory",
    "bound_sharpness_study",
    "cfl_timestep",
    "check_monotone",
    "config_from_dict",
    "config_to_dict",
    "convergence_study",
    "default_beta",
    "engquist_osher_flux",
    "evolve",
    "fbm_initial_field",
    "fbm_midpoint",
    "fit_rate",
    "flux_deriv",
    "flux_value",
    "godunov_flux",
    "holder_cap",
    "kuznetsov_bound",
    "l1_distance",
    "lax_friedrichs_flux",
    "lip_bound_rhs",
    "lip_plus",
    "lip_scaling_study",
    "make_grid",
    "max_wave_speed",
    "midpoint_scale",
    "normalize_to_unit",
    "numerical_flux",
    "project",
    "restrict",
    "run_samples_parallel",
    "rusanov_flux",
    "sample_seed",
    "sharpness_ratio",
    "step",
    "total_variation",
    "tv_decay_study",
    "tv_scaling_study",
    "tv_time_integral",
    "upwind_flux",
]
