"""Front propagation in periodic media: solvers and speed diagnostics."""

from ._core import (
    Bump,
    CflViolation,
    ConfigError,
    DegenerateForcing,
    DomainTooSmall,
    FieldTrajectory,
    InitialDatum,
    MonotonicityViolation,
    Nonlinearity,
    NonStationary,
    Perturbation,
    Plateau,
    Trajectory,
    config_hash,
    effective_speed,
    extract_speed,
    harmonic_time_g,
    mean_g,
    run_config,
    solve_chi,
    solve_direct,
    solve_ode,
    time_of_value,
    validate,
    vertical_period,
)

__all__ = [
    "Bump",
    "CflViolation",
    "ConfigError",
    "DegenerateForcing",
    "DomainTooSmall",
    "FieldTrajectory",
    "InitialDatum",
    "MonotonicityViolation",
    "Nonlinearity",
    "NonStationary",
    "Perturbation",
    "Plateau",
    "Trajectory",
    "config_hash",
    "effective_speed",
    "extract_speed",
    "harmonic_time_g",
    "mean_g",
    "run_config",
    "solve_chi",
    "solve_direct",
    "solve_ode",
    "time_of_value",
    "validate",
    "vertical_period",
]

__version__ = "0.1.0"
