"""Restricted fractional Laplacian on intervals: eigenvalues, capacities, asymptotics."""

from ._fraclab import (
    ConfigError,
    DomainError,
    FraclabError,
    GeometryError,
    IoError,
    NumericalError,
    ParameterError,
    ResolutionError,
    angular_spectrum,
    condenser_capacity,
    constants,
    eigenpairs,
    extension_compare,
    fit_rate,
    gamma,
    gamma_exponent,
    run_command,
    run_sweep,
    toeplitz_entry,
    u_capacity,
    whole_line_u_capacity,
)

__version__ = "0.1.0"
