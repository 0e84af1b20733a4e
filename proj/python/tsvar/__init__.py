"""Multiobjective variational problems on time scales."""

from ._core import (
    DimensionError,
    DomainError,
    Error,
    EvalError,
    ParseError,
    Problem,
    TimeScale,
    c1rd_norm,
    delta_derivative,
    delta_integral,
    dominance_filter,
    el_residual,
    nc_crosscheck,
    pareto_sweep,
    solve,
)

__all__ = [
    "DimensionError",
    "DomainError",
    "Error",
    "EvalError",
    "ParseError",
    "Problem",
    "TimeScale",
    "c1rd_norm",
    "delta_derivative",
    "delta_integral",
    "dominance_filter",
    "el_residual",
    "nc_crosscheck",
    "pareto_sweep",
    "solve",
]
