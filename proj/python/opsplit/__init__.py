"""Operator-splitting integrators for the viscous Burgers equation."""

from ._opsplit import (
    ConfigError,
    NumericalError,
    StabilityGuardError,
    converge,
    converge_csv,
    exact,
    run,
    scheme,
    scheme_names,
    schemes_table,
    validate_scheme,
    weno5,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "StabilityGuardError",
    "converge",
    "converge_csv",
    "exact",
    "run",
    "scheme",
    "scheme_names",
    "schemes_table",
    "validate_scheme",
    "weno5",
]
