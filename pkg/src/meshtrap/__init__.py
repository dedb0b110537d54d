"""Equilibrium, welfare and governance computations for the N-domain data-product game."""

__version__ = "0.1.0"

from .model import DomainError, DomainParams, Profile, Scenario, total_welfare  # noqa: E402
from .equilibrium import (  # noqa: E402
    EquilibriumResult,
    SolverConfig,
    generality_gap,
    grid_oracle,
    nash_equilibrium,
    social_optimum,
    trap_check,
)
from .calibration import baseline_scenario  # noqa: E402

__all__ = [
    "DomainError",
    "DomainParams",
    "EquilibriumResult",
    "Profile",
    "Scenario",
    "SolverConfig",
    "baseline_scenario",
    "generality_gap",
    "grid_oracle",
    "nash_equilibrium",
    "social_optimum",
    "total_welfare",
    "trap_check",
]
