"""Weak-disorder expansion engine."""

from ._core import (
    BudgetError,
    ConfigError,
    Model,
    ToleranceError,
    bell_number,
    const_C1,
    lattice_points,
    main_error_bound,
    nu,
    partition_maps,
    partitions,
    poisson_factorial_moment,
)

__all__ = [
    "BudgetError",
    "ConfigError",
    "Model",
    "ToleranceError",
    "bell_number",
    "const_C1",
    "lattice_points",
    "main_error_bound",
    "nu",
    "partition_maps",
    "partitions",
    "poisson_factorial_moment",
]
