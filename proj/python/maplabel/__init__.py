"""Smooth, approximately invariant label functions of 2D symplectic maps.

The compiled extension does the work; this package re-exports its surface.
"""

from maplabel._core import (
    BoundarySpec,
    ConfigError,
    Domain,
    EigenResult,
    EvpPair,
    IoError,
    KernelSpec,
    LabelGrid,
    LabelModel,
    MapSpec,
    ModelProvenance,
    NumericalError,
    Region,
    ResidualReport,
    SampleSet,
    State,
    Topology,
    ValidationReport,
    birkhoff_weights,
    build_samples,
    eval_boundary,
    eval_grid,
    eval_kernel,
    eval_label,
    iterate,
    kernel_matrix,
    load_model,
    normalize_maxabs,
    rayleigh_quotient,
    residual_components,
    save_grid_csv,
    save_model,
    score_from_pairs,
    sigma_from_density,
    sobol_sample,
    solve_bvp,
    solve_evp,
    validation_score,
    weighted_birkhoff,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySpec",
    "ConfigError",
    "Domain",
    "EigenResult",
    "EvpPair",
    "IoError",
    "KernelSpec",
    "LabelGrid",
    "LabelModel",
    "MapSpec",
    "ModelProvenance",
    "NumericalError",
    "Region",
    "ResidualReport",
    "SampleSet",
    "State",
    "Topology",
    "ValidationReport",
    "birkhoff_weights",
    "build_samples",
    "eval_boundary",
    "eval_grid",
    "eval_kernel",
    "eval_label",
    "iterate",
    "kernel_matrix",
    "load_model",
    "normalize_maxabs",
    "rayleigh_quotient",
    "residual_components",
    "save_grid_csv",
    "save_model",
    "score_from_pairs",
    "sigma_from_density",
    "sobol_sample",
    "solve_bvp",
    "solve_evp",
    "validation_score",
    "weighted_birkhoff",
]
