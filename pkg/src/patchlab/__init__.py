"""Contour dynamics for 2D Euler vortex patches.

Lagrangian and intrinsic (metric/curvature) evolution of a patch boundary,
singular-integral boundary velocity with arc-length derivatives, the
periodic Hilbert transform and its rotation group, and diagnostics for
rough-curvature initial data.
"""

__version__ = "0.1.0"

from .errors import (
    PatchlabError,
    NonSimpleCurve,
    GridTooCoarse,
    DegenerateCurve,
    ClosureViolated,
    ClosureSolveFailed,
    FeatureUnresolved,
    MissingHistory,
    MalformedFile,
    ConfigError,
    RoughCurvature,
)
from .geometry import (
    LagrangianGrid,
    CurveState,
    GeometricFrame,
    IntrinsicState,
    circle,
    ellipse,
    build_frame,
    arc_chord_ratio,
    closure_residual,
    reconstruct_curve,
    intrinsic_from_curve,
    resample_arclength,
)
from .velocity import (
    BoundaryVelocity,
    velocity,
    velocity_logsplit,
    ds_velocity,
    d2s_velocity,
    tangential_coefficient,
    boundary_velocity,
)
from .hilbert import hilbert, pv_cot_quadrature, dispersion_group, commutator_diagnostic
from .norms import lp_norm, lp_norms, holder_seminorm
from .evolution import SimulationConfig, Trajectory, invariants, step_cde, step_intrinsic, run
from .illposed import (
    IllposedDataSpec,
    DiagnosticsReport,
    build_illposed_data,
    rough_curvature_profile,
    forcing_terms,
    inflation_experiment,
    duhamel_decompose,
)
from .storage import (
    save_curve,
    load_curve,
    save_intrinsic,
    load_intrinsic,
    load_snapshot,
)

__all__ = [
    "__version__",
    "PatchlabError",
    "NonSimpleCurve",
    "GridTooCoarse",
    "DegenerateCurve",
    "ClosureViolated",
    "ClosureSolveFailed",
    "FeatureUnresolved",
    "MissingHistory",
    "MalformedFile",
    "ConfigError",
    "RoughCurvature",
    "LagrangianGrid",
    "CurveState",
    "GeometricFrame",
    "IntrinsicState",
    "circle",
    "ellipse",
    "build_frame",
    "arc_chord_ratio",
    "closure_residual",
    "reconstruct_curve",
    "intrinsic_from_curve",
    "resample_arclength",
    "BoundaryVelocity",
    "velocity",
    "velocity_logsplit",
    "ds_velocity",
    "d2s_velocity",
    "tangential_coefficient",
    "boundary_velocity",
    "hilbert",
    "pv_cot_quadrature",
    "dispersion_group",
    "commutator_diagnostic",
    "lp_norm",
    "lp_norms",
    "holder_seminorm",
    "SimulationConfig",
    "Trajectory",
    "invariants",
    "step_cde",
    "step_intrinsic",
    "run",
    "IllposedDataSpec",
    "DiagnosticsReport",
    "build_illposed_data",
    "rough_curvature_profile",
    "forcing_terms",
    "inflation_experiment",
    "duhamel_decompose",
    "save_curve",
    "load_curve",
    "save_intrinsic",
    "load_intrinsic",
    "load_snapshot",
]
