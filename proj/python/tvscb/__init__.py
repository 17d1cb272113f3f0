"""Time-varying AR/ARCH/GARCH estimation with simultaneous confidence bands."""

from ._tvscb import (
    DEFAULT_SEED,
    ConvergenceError,
    SingularMatrixError,
    bands,
    fit_curve,
    forecast_sigma2,
    gumbel_quantile,
    kernel_moment,
    parse_csv,
    select_bandwidth,
    simulate,
)

__all__ = [
    "DEFAULT_SEED",
    "ConvergenceError",
    "SingularMatrixError",
    "bands",
    "fit_curve",
    "forecast_sigma2",
    "gumbel_quantile",
    "kernel_moment",
    "parse_csv",
    "select_bandwidth",
    "simulate",
]
