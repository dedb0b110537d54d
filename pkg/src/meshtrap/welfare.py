"""Welfare loss between decentralized and planner outcomes, and integration debt."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .equilibrium import (
    DEFAULT_SOLVER,
    EquilibriumResult,
    PlannerMode,
    SolverConfig,
    nash_equilibrium,
    social_optimum,
)
from .model import DomainError, Profile, Scenario, total_welfare


@dataclass(frozen=True)
class WelfareLossReport:
    """Closed-form loss next to the direct welfare difference.

    The closed form drops the fixed-cost and own-synergy terms, so the
    two measures generally disagree; ``discrepancy`` is always reported.
    """

    closed_form: float
    direct: float
    discrepancy: float
    per_domain_terms: np.ndarray
    nash: EquilibriumResult = field(repr=False)
    optimum: EquilibriumResult = field(repr=False)


@dataclass(frozen=True)
class DebtReport:
    pairwise: np.ndarray
    total: float
    symmetric_closed_form: float | None = None


@dataclass(frozen=True)
class DebtScaling:
    n_values: tuple[int, ...]
    totals: tuple[float, ...]
    exponent: float
    # least-squares residual sums for TD = a + b N^2 and TD = a + b N
    sse_quadratic: float
    sse_linear: float


def welfare_loss(
    s: Scenario, mode: PlannerMode = "full-objective", cfg: SolverConfig = DEFAULT_SOLVER
) -> WelfareLossReport:
    nash = nash_equilibrium(s, cfg).require_converged()
    opt = social_optimum(s, mode, cfg).require_converged()
    q = nash.profile.q
    g_ne, g_so = nash.profile.g, opt.profile.g
    terms = (s.externality + s.consumer_weight) * q * (g_so - g_ne) - 0.5 * s.gamma_g * (g_so**2 - g_ne**2) * q
    closed = float(np.sum(terms))
    direct = total_welfare(s, opt.profile) - total_welfare(s, nash.profile)
    return WelfareLossReport(closed, direct, abs(closed - direct), terms, nash, opt)


def pairwise_debt(tau: float, q_j: float, g_j: float) -> float:
    """Debt of one custom integration against domain j's product."""
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    for name, v in (("q_j", q_j), ("g_j", g_j)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {v}")
    return tau * q_j * (1.0 - g_j)


def total_debt(s: Scenario, p: Profile) -> DebtReport:
    n = s.n_domains
    if len(p) != n:
        raise DomainError(f"profile has {len(p)} domains, scenario has {n}")
    pairwise = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                pairwise[i, j] = pairwise_debt(s.tau, p.q[j], p.g[j])
    total = float(np.sum(pairwise * s.p_matrix))

    closed = None
    params = s.symmetric_params()
    if params is not None and np.all(p.g == 0.0) and np.ptp(p.q) == 0.0:
        closed = s.tau * float(p.q[0]) * n * (n - 1) * params["p_bar"]
    return DebtReport(pairwise, total, closed)


def debt_scaling_curve(
    template: Scenario, n_values: Sequence[int], cfg: SolverConfig = DEFAULT_SOLVER
) -> DebtScaling:
    """Nash technical debt at each N, with a log-log least-squares slope."""
    if not template.is_symmetric:
        raise DomainError("debt scaling needs a symmetric template")
    ns = tuple(int(n) for n in n_values)
    if len(ns) < 2 or min(ns) < 2:
        raise DomainError("need at least two N values, each >= 2")
    totals = []
    for n in ns:
        s = template.with_n_domains(n)
        nash = nash_equilibrium(s, cfg).require_converged()
        totals.append(total_debt(s, nash.profile).total)

    x = np.asarray(ns, dtype=float)
    y = np.asarray(totals)
    if np.all(y > 0):
        exponent = float(np.polyfit(np.log(x), np.log(y), 1)[0])
    else:
        exponent = float("nan")
    sse = []
    for design in (x**2, x):
        A = np.column_stack([np.ones_like(x), design])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        sse.append(float(np.sum((A @ coef - y) ** 2)))
    return DebtScaling(ns, tuple(totals), exponent, sse[0], sse[1])
