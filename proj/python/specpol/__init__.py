"""Python bindings for the specpol second-order spectrum library."""

from ._core import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    Config,
    ConfigError,
    InvalidArgument,
    NumericalError,
    convergence_table,
    enclosures,
    galerkin_spectrum,
    run,
    second_order_spectrum,
    sigma,
    subcommands,
    szego_stats,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "Config",
    "ConfigError",
    "InvalidArgument",
    "NumericalError",
    "convergence_table",
    "enclosures",
    "galerkin_spectrum",
    "run",
    "second_order_spectrum",
    "sigma",
    "subcommands",
    "szego_stats",
]
