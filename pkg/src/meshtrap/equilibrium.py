"""Best responses, Nash equilibrium, planner optimum and the brute-force oracle.

Payoffs are separable across domains: domain i's profit depends on the
others only through its cross-domain benefit, which does not vary with
(q_i, g_i). Every solve therefore reduces to maximizing, per domain,

    f_i(q, g) = alpha_i q (1 + beta g) - C_i(q, g) + a_i q g + b_i g

where ``a_i`` and ``b_i`` are the external marginal values the decision
maker internalizes: zero for a private domain, the externality column sums
for the planner, the subsidy rate for a subsidized domain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .model import (
    DomainError,
    DomainParams,
    Profile,
    Scenario,
    cost,
    cross_benefit,
    domain_profit,
    own_benefit,
)

log = logging.getLogger(__name__)

PlannerMode = Literal["paper-foc", "full-objective"]
PLANNER_MODES = ("paper-foc", "full-objective")

# Points in the quality grid used to certify that a stationary point is the
# global maximum of f_i (the g-maximization is exact for each grid q).
_POLISH_POINTS = 2001
_MAX_RESTARTS = 5


class ConvergenceError(RuntimeError):
    """Raised by callers that need a converged solve and did not get one."""

    def __init__(self, result: "EquilibriumResult", what: str = "solver"):
        self.result = result
        super().__init__(
            f"{what} did not converge: residual {result.residual:.3e} after {result.iterations} iterations"
        )


class OracleCycleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 10_000
    damping: float = 0.5

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class EquilibriumResult:
    profile: Profile
    iterations: int
    residual: float
    converged: bool
    mode: str = "nash"
    degenerate_domains: frozenset[int] = frozenset()

    @property
    def corner_domains(self) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self.profile.g == 0.0))

    def require_converged(self) -> "EquilibriumResult":
        if not self.converged:
            raise ConvergenceError(self, self.mode)
        return self


@dataclass(frozen=True)
class DomainTrap:
    private_synergy: float
    effective_fixed_cost: float
    trapped: bool


@dataclass(frozen=True)
class TrapDiagnosis:
    per_domain: tuple[DomainTrap, ...]
    organization_trapped: bool
    nash: EquilibriumResult | None = field(default=None, repr=False)


@dataclass(frozen=True)
class GapReport:
    closed_form: np.ndarray
    realized: np.ndarray
    nash: EquilibriumResult = field(repr=False)
    optimum: EquilibriumResult = field(repr=False)


# -- single-domain best responses ----------------------------------------------


def degenerate_quality(d: DomainParams, q: float) -> bool:
    """True when q = 0 and kappa > 0: kappa / q diverges and generality never pays."""
    return q == 0.0 and d.kappa > 0.0


def best_response_g(d: DomainParams, beta: float, q: float) -> float:
    """Private optimal generality at quality q, clamped to [0, 1]."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    if q == 0.0:
        # degenerate: flagged via degenerate_quality(); no generality is worth buying
        return 0.0
    return float(np.clip((d.alpha * beta - d.kappa / q) / d.gamma_g, 0.0, 1.0))


def best_response_q(d: DomainParams, beta: float, g: float) -> float:
    """Private optimal quality at generality g; alpha / gamma_q when g = 0."""
    if not 0.0 <= g <= 1.0:
        raise DomainError(f"g must lie in [0, 1], got {g}")
    q = (d.alpha * (1.0 + beta * g) - 0.5 * d.gamma_g * g * g) / d.gamma_q
    return float(np.clip(q, 0.0, 1.0))


def profit_gradient(s: Scenario, p: Profile) -> tuple[np.ndarray, np.ndarray]:
    """Analytic (d pi_i / d q_i, d pi_i / d g_i) for every domain."""
    q, g = p.q, p.g
    dq = s.alpha * (1.0 + s.beta * g) - s.gamma_q * q - 0.5 * s.gamma_g * g * g
    dg = s.alpha * s.beta * q - s.gamma_g * g * q - s.kappa
    return dq, dg


# -- vectorized machinery shared by every solve -----------------------------


@dataclass(frozen=True)
class _Objective:
    """Arrays for f_i(q, g) = alpha q (1 + beta g) - C(q, g) + a q g + b g."""

    alpha: np.ndarray
    beta: float
    gamma_q: np.ndarray
    gamma_g: np.ndarray
    kappa: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def build(cls, s: Scenario, a=0.0, b=0.0) -> "_Objective":
        n = s.n_domains
        return cls(
            s.alpha, s.beta, s.gamma_q, s.gamma_g, s.kappa,
            np.broadcast_to(np.asarray(a, dtype=float), (n,)).copy(),
            np.broadcast_to(np.asarray(b, dtype=float), (n,)).copy(),
        )

    def value(self, q, g):
        return (
            self.alpha * q * (1.0 + self.beta * g)
            - 0.5 * self.gamma_q * q * q
            - 0.5 * self.gamma_g * g * g * q
            - self.kappa * g
            + self.a * q * g
            + self.b * g
        )

    def br_q(self, g):
        q = (self.alpha * (1.0 + self.beta * g) - 0.5 * self.gamma_g * g * g + self.a * g) / self.gamma_q
        return np.clip(q, 0.0, 1.0)

    def br_g(self, q):
        net_fixed = self.kappa - self.b
        with np.errstate(divide="ignore", invalid="ignore"):
            interior = (self.alpha * self.beta + self.a - net_fixed / q) / self.gamma_g
        # at q = 0 the objective is linear in g with slope -net_fixed
        at_zero = np.where(net_fixed < 0, 1.0, 0.0)
        return np.clip(np.where(q > 0, interior, at_zero), 0.0, 1.0)

    def degenerate(self, q) -> np.ndarray:
        return (q == 0.0) & (self.kappa - self.b > 0)


def _iterate(obj: _Objective, q, g, cfg: SolverConfig, scheme: str):
    residual = np.inf
    for it in range(1, cfg.max_iter + 1):
        if scheme == "jacobi":
            q_new, g_new = obj.br_q(g), obj.br_g(q)
            residual = float(max(np.max(np.abs(q_new - q)), np.max(np.abs(g_new - g))))
            q = q + cfg.damping * (q_new - q)
            g = g + cfg.damping * (g_new - g)
        else:  # gauss-seidel coordinate ascent
            q_new = obj.br_q(g)
            g_new = obj.br_g(q_new)
            residual = float(max(np.max(np.abs(q_new - q)), np.max(np.abs(g_new - g))))
            q, g = q_new, g_new
        if residual <= cfg.tol:
            # one undamped step so clamped coordinates land exactly on 0 or 1
            q, g = obj.br_q(g), obj.br_g(q)
            # residual of the accepted iterate, not of the pre-update point
            residual = float(max(np.max(np.abs(obj.br_q(g) - q)), np.max(np.abs(obj.br_g(q) - g))))
            if residual <= cfg.tol:
                return q, g, it, residual, True
    return q, g, cfg.max_iter, residual, False


def _global_candidates(obj: _Objective):
    """Best point of the profile function max_g f_i(q, g) over a quality grid."""
    grid = np.linspace(0.0, 1.0, _POLISH_POINTS)
    qq = np.broadcast_to(grid[:, None], (grid.size, obj.alpha.size))
    gg = obj.br_g(qq)
    vals = obj.value(qq, gg)
    k = np.argmax(vals, axis=0)
    cols = np.arange(obj.alpha.size)
    return qq[k, cols], gg[k, cols], vals[k, cols]


def _solve(s: Scenario, obj: _Objective, cfg: SolverConfig, scheme: str, mode: str) -> EquilibriumResult:
    q = np.clip(s.alpha / s.gamma_q, 0.0, 1.0)
    g = np.zeros(s.n_domains)
    total_it = 0
    for _ in range(_MAX_RESTARTS + 1):
        q, g, it, residual, converged = _iterate(obj, q, g, cfg, scheme)
        total_it += it
        if not converged:
            log.warning("%s solve stopped at max_iter=%d, residual %.3e", mode, cfg.max_iter, residual)
            break
        cq, cg, cval = _global_candidates(obj)
        better = cval > obj.value(q, g) + 1e-12
        if not np.any(better):
            break
        # a stationary point that is not the global maximizer: restart there
        log.debug("%s: restarting %d domain(s) from global grid candidates", mode, int(better.sum()))
        q = np.where(better, cq, q)
        g = np.where(better, cg, g)
    q = np.clip(q, 0.0, 1.0)
    g = np.clip(g, 0.0, 1.0)
    degenerate = frozenset(int(i) for i in np.flatnonzero(obj.degenerate(q)))
    return EquilibriumResult(Profile(q, g), total_it, residual, converged, mode, degenerate)


# -- public solvers -------------------------------------------------------------


def nash_equilibrium(s: Scenario, cfg: SolverConfig = DEFAULT_SOLVER) -> EquilibriumResult:
    """Damped synchronous best-response iteration from q = alpha/gamma_q, g = 0."""
    return _solve(s, _Objective.build(s), cfg, "jacobi", "nash")


def planner_marginals(s: Scenario, mode: PlannerMode) -> tuple[np.ndarray, np.ndarray]:
    """(a_i, b_i) the planner adds to domain i's private objective."""
    if mode not in PLANNER_MODES:
        raise ValueError(f"unknown planner mode {mode!r}; expected one of {PLANNER_MODES}")
    a = s.externality + s.consumer_weight
    # the closed-form planner FOC drops the switching-cost term M*S; the full objective keeps it
    b = np.zeros(s.n_domains) if mode == "paper-foc" else np.full(s.n_domains, s.m_consumers * s.switching_cost)
    return a, b


def social_optimum(
    s: Scenario, mode: PlannerMode = "paper-foc", cfg: SolverConfig = DEFAULT_SOLVER
) -> EquilibriumResult:
    """Planner profile.

    ``paper-foc`` solves the planner's generality FOC jointly with the
    planner's quality FOC by damped iteration. ``full-objective`` maximizes
    total welfare by coordinate ascent, refined by a global grid check.
    """
    a, b = planner_marginals(s, mode)
    scheme = "jacobi" if mode == "paper-foc" else "gauss-seidel"
    return _solve(s, _Objective.build(s, a, b), cfg, scheme, mode)


def solve_with_marginals(
    s: Scenario, a, b=0.0, cfg: SolverConfig = DEFAULT_SOLVER, mode: str = "custom"
) -> EquilibriumResult:
    """Nash equilibrium when each domain also earns a_i q_i g_i + b_i g_i."""
    return _solve(s, _Objective.build(s, a, b), cfg, "jacobi", mode)


def generality_gap(
    s: Scenario, mode: PlannerMode = "paper-foc", cfg: SolverConfig = DEFAULT_SOLVER
) -> GapReport:
    """Closed-form gap sum_{j != i} lambda_ji / gamma_g next to the solved gap."""
    nash = nash_equilibrium(s, cfg)
    opt = social_optimum(s, mode, cfg)
    closed = s.externality / s.gamma_g
    return GapReport(closed, opt.profile.g - nash.profile.g, nash, opt)


def trap_check(s: Scenario, nash: EquilibriumResult | None = None) -> TrapDiagnosis:
    """Corner condition alpha_i beta < kappa / q_i at each domain's Nash quality."""
    if nash is None:
        nash = nash_equilibrium(s)
    rows = []
    for d, q in zip(s.domains, nash.profile.q):
        synergy = d.alpha * s.beta
        fixed = d.kappa / q if q > 0 else (np.inf if d.kappa > 0 else 0.0)
        rows.append(DomainTrap(synergy, float(fixed), bool(synergy < fixed)))
    return TrapDiagnosis(tuple(rows), all(r.trapped for r in rows), nash)


def hub_domains(s: Scenario, factor: float = 2.0) -> frozenset[int]:
    """Domains whose provided cross-domain value exceeds ``factor`` times the mean."""
    if not factor > 1.0:
        raise ValueError(f"factor must be > 1, got {factor}")
    col = s.externality
    return frozenset(int(i) for i in np.flatnonzero(col > factor * col.mean()))


# -- brute-force oracle ---------------------------------------------------------


def grid_oracle(s: Scenario, resolution: float = 0.01, max_rounds: int = 1000) -> Profile:
    """Exhaustive best-response dynamics on a discretized strategy grid.

    Each domain in turn moves to the grid point maximizing its profit,
    evaluated with :func:`domain_profit`, given the others' current play.
    Stops when no domain gains more than 1e-12.
    """
    if not 0 < resolution <= 0.1:
        raise ValueError(f"resolution must lie in (0, 0.1], got {resolution}")
    steps = int(np.ceil(1.0 / resolution - 1e-9))
    grid = np.linspace(0.0, 1.0, steps + 1)
    n = s.n_domains
    q_idx = np.zeros(n, dtype=int)
    g_idx = np.zeros(n, dtype=int)
    # rows index g, columns index q; argmax ties resolve to the lowest g
    G, Q = np.meshgrid(grid, grid, indexing="ij")
    seen = {}
    for rnd in range(max_rounds):
        key = (tuple(q_idx), tuple(g_idx))
        if key in seen:
            raise OracleCycleError(f"best-response cycle of length {rnd - seen[key]} entered at round {seen[key]}")
        seen[key] = rnd
        moved = False
        for i in range(n):
            profile = Profile(grid[q_idx], grid[g_idx])
            current = domain_profit(s, profile, i)
            surface = _profit_surface(s, profile, i, Q, G)
            k = int(np.argmax(surface))
            if surface.flat[k] > current + 1e-12:
                gi, qi = np.unravel_index(k, surface.shape)
                q_idx[i], g_idx[i] = qi, gi
                moved = True
        if not moved:
            return Profile(grid[q_idx], grid[g_idx])
    raise OracleCycleError(f"no fixed point after {max_rounds} rounds")


def _profit_surface(s: Scenario, profile: Profile, i: int, Q: np.ndarray, G: np.ndarray) -> np.ndarray:
    d = s.domains[i]
    return own_benefit(d, s.beta, Q, G) - cost(d, Q, G) + cross_benefit(s, profile, i)
