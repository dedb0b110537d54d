"""Governance regimes: pure mesh, centralized hydration, federated subsidies, hybrid.

Subsidies are marginal payments per unit of generality, s_i = (sum_j lambda_ji) q_i,
so a subsidized domain earns (sum_j lambda_ji) q_i g_i on top of its profit.
Transfers net out of total welfare.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .equilibrium import (
    DEFAULT_SOLVER,
    SolverConfig,
    best_response_q,
    nash_equilibrium,
    social_optimum,
    solve_with_marginals,
)
from .model import Profile, Scenario, total_welfare

Regime = Literal["pure-mesh", "centralized", "federated", "hybrid"]

DEFAULT_BIG_GAMMA = 10.0
DEFAULT_HYBRID_CORRECTION = 0.7
WELFARE_TIE_TOL = 1e-9

COORDINATION_COST = {
    "pure-mesh": "minimal",
    "centralized": "moderate-high",
    "federated": "low (if verified)",
    "hybrid": "moderate",
}
IMPLEMENTATION_FRICTION = {
    "pure-mesh": "minimal",
    "centralized": "high (bottleneck risk)",
    "federated": "very high (information asymmetry)",
    "hybrid": "moderate",
}


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    profile: Profile
    welfare: float
    subsidy_schedule: np.ndarray | None = None
    g_standard: float | None = None
    platform_cost: float = 0.0
    rank: int | None = None
    welfare_tied: bool = False

    @property
    def coordination_cost(self) -> str:
        return COORDINATION_COST[self.regime]

    @property
    def friction(self) -> str:
        return IMPLEMENTATION_FRICTION[self.regime]


@dataclass(frozen=True)
class CentralizedSolution:
    g_standard: float
    g_unclamped: float
    g_grid: float
    objective: float


def _pure_mesh(s: Scenario, cfg: SolverConfig) -> RegimeReport:
    nash = nash_equilibrium(s, cfg).require_converged()
    return RegimeReport("pure-mesh", nash.profile, total_welfare(s, nash.profile))


def central_objective(s: Scenario, q: np.ndarray, G, big_gamma: float):
    """Platform objective for a uniform standard G at qualities q (vectorized in G)."""
    G = np.asarray(G, dtype=float)
    cross = np.sum(s.lambda_matrix @ q) * G
    consumers = np.sum(s.omega @ q) * G - s.m_consumers * s.switching_cost * s.n_domains * (1.0 - G)
    return cross + consumers - big_gamma * G * G * np.mean(q)


def solve_central_standard(
    s: Scenario, q: np.ndarray, big_gamma: float, grid_points: int = 10_001
) -> CentralizedSolution:
    """Closed-form G* from the linear FOC, clamped, with a grid-search cross-check."""
    if not big_gamma > 0:
        raise ValueError(f"big_gamma must be > 0, got {big_gamma}")
    slope = np.sum(s.lambda_matrix @ q) + np.sum(s.omega @ q) + s.m_consumers * s.switching_cost * s.n_domains
    unclamped = float(slope / (2.0 * big_gamma * np.mean(q)))
    G = float(np.clip(unclamped, 0.0, 1.0))
    grid = np.linspace(0.0, 1.0, grid_points)
    g_grid = float(grid[np.argmax(central_objective(s, q, grid, big_gamma))])
    return CentralizedSolution(G, unclamped, g_grid, float(central_objective(s, q, G, big_gamma)))


def centralized_hydration(
    s: Scenario, big_gamma: float = DEFAULT_BIG_GAMMA, cfg: SolverConfig = DEFAULT_SOLVER
) -> RegimeReport:
    """Platform sets g_i = G* for all i; qualities stay at their Nash values.

    Reported welfare is total welfare at that profile minus the platform's
    investment cost Gamma G^2 q_bar.
    """
    nash = nash_equilibrium(s, cfg).require_converged()
    q = nash.profile.q
    sol = solve_central_standard(s, q, big_gamma)
    profile = Profile(q, np.full(s.n_domains, sol.g_standard))
    platform = big_gamma * sol.g_standard**2 * float(np.mean(q))
    return RegimeReport(
        "centralized",
        profile,
        total_welfare(s, profile) - platform,
        g_standard=sol.g_standard,
        platform_cost=platform,
    )


def pigouvian_subsidy(s: Scenario, q: np.ndarray | None = None, cfg: SolverConfig = DEFAULT_SOLVER) -> np.ndarray:
    """Per-unit-generality subsidy (sum_{j != i} lambda_ji) q_i.

    Without ``q`` it is evaluated at the subsidized equilibrium's qualities.
    """
    if q is None:
        return subsidized_equilibrium(s, cfg).subsidy_schedule
    return s.externality * np.asarray(q, dtype=float)


def subsidized_equilibrium(s: Scenario, cfg: SolverConfig = DEFAULT_SOLVER) -> RegimeReport:
    res = solve_with_marginals(s, s.externality, 0.0, cfg, mode="subsidized").require_converged()
    schedule = pigouvian_subsidy(s, res.profile.q)
    return RegimeReport("federated", res.profile, total_welfare(s, res.profile), subsidy_schedule=schedule)


def hybrid_regime(
    s: Scenario, correction: float = DEFAULT_HYBRID_CORRECTION, cfg: SolverConfig = DEFAULT_SOLVER
) -> RegimeReport:
    """Generality at a fraction of the planner level; domains re-choose quality."""
    if not 0.0 <= correction <= 1.0:
        raise ValueError(f"correction must lie in [0, 1], got {correction}")
    opt = social_optimum(s.without_consumers(), "paper-foc", cfg).require_converged()
    g = correction * opt.profile.g
    q = np.array([best_response_q(d, s.beta, gi) for d, gi in zip(s.domains, g)])
    profile = Profile(q, g)
    return RegimeReport("hybrid", profile, total_welfare(s, profile))


def regime_comparison(
    s: Scenario,
    big_gamma: float = DEFAULT_BIG_GAMMA,
    correction: float = DEFAULT_HYBRID_CORRECTION,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> list[RegimeReport]:
    """All four regimes ranked by welfare (1 = highest).

    Regimes within WELFARE_TIE_TOL of another are flagged ``welfare_tied``;
    their relative rank then follows the listing order.
    """
    reports = [
        _pure_mesh(s, cfg),
        centralized_hydration(s, big_gamma, cfg),
        subsidized_equilibrium(s, cfg),
        hybrid_regime(s, correction, cfg),
    ]
    order = sorted(range(4), key=lambda k: -reports[k].welfare)
    ranked = [None] * 4
    for rank, k in enumerate(order, start=1):
        tied = any(
            j != k and abs(reports[j].welfare - reports[k].welfare) <= WELFARE_TIE_TOL for j in range(4)
        )
        ranked[k] = dataclasses.replace(reports[k], rank=rank, welfare_tied=tied)
    return ranked
