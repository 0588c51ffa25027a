"""GQARCH-Ito volatility toolkit: simulation, noise-robust realized variance,
QMLE fitting, and fractional-day volatility forecasting."""

from gqito._core import (
    ConfigError,
    DomainError,
    TickPanel,
    __version__,
    derive_coeffs,
    evaluate,
    expected_window_iv,
    fit,
    g_series_truncated,
    ingest_ticks,
    run_experiment,
    rv,
    simulate_gqarch,
    simulate_heston,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "TickPanel",
    "__version__",
    "derive_coeffs",
    "evaluate",
    "expected_window_iv",
    "fit",
    "g_series_truncated",
    "ingest_ticks",
    "run_experiment",
    "rv",
    "simulate_gqarch",
    "simulate_heston",
]
