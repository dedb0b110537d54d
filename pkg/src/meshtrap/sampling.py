"""Seeded random scenarios for oracle and property checks."""

from __future__ import annotations

import numpy as np

from .equilibrium import DEFAULT_SOLVER, SolverConfig, nash_equilibrium, social_optimum
from .model import DomainParams, Scenario


def random_scenario(
    rng: np.random.Generator | int,
    n_domains: int | None = None,
    max_domains: int = 6,
    with_consumers: bool = True,
    symmetric: bool = False,
) -> Scenario:
    """Draw a scenario with parameters around the enterprise ranges.

    Cross-domain values are asymmetric unless ``symmetric`` is set.
    """
    rng = np.random.default_rng(rng)
    n = int(n_domains or rng.integers(2, max_domains + 1))
    m = int(rng.integers(0, 4)) if with_consumers else 0

    def draw_domain():
        return DomainParams(
            alpha=rng.uniform(0.3, 0.9),
            gamma_q=rng.uniform(0.6, 1.6),
            gamma_g=rng.uniform(0.3, 0.8),
            kappa=rng.uniform(0.0, 0.3),
        )

    if symmetric:
        d = draw_domain()
        domains = (d,) * n
        lam = rng.uniform(0.0, 0.6) * (1.0 - np.eye(n))
        omega = np.full((m, n), rng.uniform(0.0, 0.2))
        p = rng.uniform(0.0, 1.0) * (1.0 - np.eye(n))
    else:
        domains = tuple(draw_domain() for _ in range(n))
        lam = rng.uniform(0.0, 0.6, (n, n))
        omega = rng.uniform(0.0, 0.2, (m, n))
        p = rng.uniform(0.0, 1.0, (n, n))
    return Scenario(
        domains=domains,
        beta=rng.uniform(0.05, 0.8),
        lambda_matrix=lam,
        omega=omega,
        switching_cost=rng.uniform(0.0, 0.1),
        tau=rng.uniform(0.5, 2.0),
        p_matrix=p,
    )


def _interior(x: np.ndarray, margin: float) -> bool:
    return bool(np.all(x > margin) and np.all(x < 1.0 - margin))


def random_interior_scenario(
    rng: np.random.Generator | int,
    max_domains: int = 8,
    margin: float = 1e-3,
    max_tries: int = 10_000,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> Scenario:
    """Rejection-sample a consumer-free scenario whose Nash and paper-foc
    planner profiles are both strictly inside the unit square."""
    rng = np.random.default_rng(rng)
    for _ in range(max_tries):
        n = int(rng.integers(2, max_domains + 1))
        domains = tuple(
            DomainParams(
                alpha=rng.uniform(0.3, 0.9),
                gamma_q=rng.uniform(0.9, 2.0),
                gamma_g=rng.uniform(0.5, 1.5),
                kappa=rng.uniform(0.0, 0.05),
            )
            for _ in range(n)
        )
        s = Scenario(
            domains=domains,
            beta=rng.uniform(0.3, 1.0),
            lambda_matrix=rng.uniform(0.0, 0.6 / n, (n, n)),
            omega=np.zeros((0, n)),
            p_matrix=rng.uniform(0.0, 1.0, (n, n)),
        )
        ne = nash_equilibrium(s, cfg)
        so = social_optimum(s, "paper-foc", cfg)
        if not (ne.converged and so.converged):
            continue
        if all(_interior(x, margin) for x in (ne.profile.q, ne.profile.g, so.profile.q, so.profile.g)):
            return s
    raise RuntimeError(f"no interior scenario found in {max_tries} draws")
