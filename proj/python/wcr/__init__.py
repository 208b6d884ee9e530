"""Workload characterization and reduction toolkit.

Thin Python layer over the C++ core: metric derivation, behavior
classification, PCA/K-means workload subsetting and trace-driven cache
simulation.
"""

from ._core import (
    Error,
    IoError,
    ValidationError,
    bic_score,
    choose_k,
    classify_data_behavior,
    classify_system_behavior,
    data_movement_share,
    default_capacity_grid,
    derive_metrics,
    estimate_footprint,
    fit_pca,
    integer_breakdown,
    kmeans,
    normalize_zscore,
    reduce,
    schema_metrics,
    schema_version,
    select_representatives,
    simulate,
    stack_distance_oracle,
    sweep_capacities,
)

IFETCH, LOAD, STORE = 0, 1, 2

__version__ = "0.1.0"

__all__ = [
    "Error",
    "IoError",
    "ValidationError",
    "IFETCH",
    "LOAD",
    "STORE",
    "bic_score",
    "choose_k",
    "classify_data_behavior",
    "classify_system_behavior",
    "data_movement_share",
    "default_capacity_grid",
    "derive_metrics",
    "estimate_footprint",
    "fit_pca",
    "integer_breakdown",
    "kmeans",
    "normalize_zscore",
    "reduce",
    "schema_metrics",
    "schema_version",
    "select_representatives",
    "simulate",
    "stack_distance_oracle",
    "sweep_capacities",
]
