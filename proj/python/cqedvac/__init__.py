from ._core import (
    ConfigError,
    ConvergenceError,
    CutoffError,
    DomainError,
    analytic_splitting_N2,
    beta_exponent,
    coherent_amplitudes,
    commands,
    coupling_estimate,
    critical_coupling,
    ferromagnetic_minima,
    fluxonium_levels,
    polariton,
    run,
    splitting,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "CutoffError",
    "DomainError",
    "analytic_splitting_N2",
    "beta_exponent",
    "coherent_amplitudes",
    "commands",
    "coupling_estimate",
    "critical_coupling",
    "ferromagnetic_minima",
    "fluxonium_levels",
    "polariton",
    "run",
    "splitting",
]
