"""Primitives of the N-domain data-product game.

Every function here is pure. Parameters are validated once, when a
:class:`DomainParams`, :class:`Scenario` or :class:`Profile` is built; the
primitives only check that strategies lie in the unit square.

Index conventions
-----------------
``lambda_matrix[j, i]`` is the value domain ``j`` derives from domain ``i``'s
generality, so row ``i`` is what domain ``i`` *receives* and column ``i`` is
what domain ``i`` *provides* to the rest of the organization.
``omega[k, i]`` is consumer ``k``'s weight on domain ``i``.
``p_matrix[i, j]`` is the probability that domain ``i`` needs data from ``j``
(0.5 off the diagonal when omitted).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

MIN_DOMAINS = 2
# integration-need probability used when no P matrix is given
DEFAULT_P_BAR = 0.5


class DomainError(ValueError):
    """A strategy or parameter lies outside its admissible range."""


def _frozen_array(x, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.shape != shape:
        raise DomainError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _check_unit(name: str, x) -> None:
    x = np.asarray(x)
    if np.any(x < 0.0) or np.any(x > 1.0) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class DomainParams:
    """Per-domain payoff parameters.

    alpha is the domain's own analytics value, gamma_q and gamma_g the
    marginal quality and generalization cost coefficients, kappa the fixed
    cost per unit of generality.
    """

    alpha: float
    gamma_q: float
    gamma_g: float
    kappa: float

    def __post_init__(self):
        for name in ("alpha", "gamma_q", "gamma_g"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be > 0, got {v}")
        if not (np.isfinite(self.kappa) and self.kappa >= 0):
            raise DomainError(f"kappa must be >= 0, got {self.kappa}")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A complete game instance. Immutable; arrays are read-only."""

    domains: tuple[DomainParams, ...]
    beta: float
    lambda_matrix: np.ndarray
    omega: np.ndarray
    switching_cost: float = 0.0
    tau: float = 1.0
    p_matrix: np.ndarray | None = None
    allow_single_domain: bool = field(default=False, repr=False)

    def __post_init__(self):
        domains = tuple(self.domains)
        object.__setattr__(self, "domains", domains)
        n = len(domains)
        min_n = 1 if self.allow_single_domain else MIN_DOMAINS
        if n < min_n:
            raise DomainError(f"need at least {min_n} domains, got {n}")
        if not all(isinstance(d, DomainParams) for d in domains):
            raise DomainError("domains must be DomainParams instances")
        for name in ("beta", "switching_cost", "tau"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be >= 0, got {v}")

        lam = np.array(self.lambda_matrix, dtype=float)
        if lam.shape != (n, n):
            raise DomainError(f"lambda_matrix has shape {lam.shape}, expected {(n, n)}")
        np.fill_diagonal(lam, 0.0)
        if np.any(lam < 0):
            raise DomainError("lambda_matrix entries must be >= 0")
        object.__setattr__(self, "lambda_matrix", _frozen_array(lam, (n, n), "lambda_matrix"))

        om = np.array(self.omega, dtype=float)
        if om.size == 0:
            om = om.reshape(0, n)
        if om.ndim != 2 or om.shape[1] != n:
            raise DomainError(f"omega has shape {om.shape}, expected (M, {n})")
        if np.any(om < 0):
            raise DomainError("omega entries must be >= 0")
        object.__setattr__(self, "omega", _frozen_array(om, om.shape, "omega"))

        p = np.full((n, n), DEFAULT_P_BAR) if self.p_matrix is None else np.array(self.p_matrix, dtype=float)
        if p.shape != (n, n):
            raise DomainError(f"p_matrix has shape {p.shape}, expected {(n, n)}")
        np.fill_diagonal(p, 0.0)
        if np.any(p < 0) or np.any(p > 1):
            raise DomainError("p_matrix entries must lie in [0, 1]")
        object.__setattr__(self, "p_matrix", _frozen_array(p, (n, n), "p_matrix"))

    # -- construction -----------------------------------------------------

    @classmethod
    def symmetric(
        cls,
        n_domains: int,
        alpha: float,
        gamma_q: float,
        gamma_g: float,
        kappa: float,
        beta: float,
        lam: float,
        p_bar: float = DEFAULT_P_BAR,
        m_consumers: int = 0,
        omega: float = 0.0,
        switching_cost: float = 0.0,
        tau: float = 1.0,
        allow_single_domain: bool = False,
    ) -> "Scenario":
        """Expand scalar parameters into uniform vectors and matrices."""
        n = int(n_domains)
        if n != n_domains:
            raise DomainError(f"n_domains must be an integer, got {n_domains}")
        if m_consumers < 0 or int(m_consumers) != m_consumers:
            raise DomainError(f"m_consumers must be a non-negative integer, got {m_consumers}")
        off = 1.0 - np.eye(n)
        d = DomainParams(alpha, gamma_q, gamma_g, kappa)
        return cls(
            domains=(d,) * n,
            beta=beta,
            lambda_matrix=lam * off,
            omega=np.full((int(m_consumers), n), float(omega)),
            switching_cost=switching_cost,
            tau=tau,
            p_matrix=p_bar * off,
            allow_single_domain=allow_single_domain,
        )

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def without_consumers(self) -> "Scenario":
        return self.replace(omega=np.zeros((0, self.n_domains)))

    def with_domain_params(self, **changes) -> "Scenario":
        """Apply the same DomainParams field change to every domain."""
        return self.replace(domains=tuple(dataclasses.replace(d, **changes) for d in self.domains))

    # -- derived quantities -------------------------------------------------

    @property
    def n_domains(self) -> int:
        return len(self.domains)

    @property
    def m_consumers(self) -> int:
        return self.omega.shape[0]

    @property
    def alpha(self) -> np.ndarray:
        return np.array([d.alpha for d in self.domains])

    @property
    def gamma_q(self) -> np.ndarray:
        return np.array([d.gamma_q for d in self.domains])

    @property
    def gamma_g(self) -> np.ndarray:
        return np.array([d.gamma_g for d in self.domains])

    @property
    def kappa(self) -> np.ndarray:
        return np.array([d.kappa for d in self.domains])

    @property
    def externality(self) -> np.ndarray:
        """Column sums sum_{j != i} lambda_ji: value domain i provides to others."""
        return self.lambda_matrix.sum(axis=0)

    @property
    def consumer_weight(self) -> np.ndarray:
        """M * omega_bar_i, i.e. the column sums of omega."""
        return self.omega.sum(axis=0)

    def symmetric_params(self) -> dict | None:
        """Scalar parameters if the scenario is symmetric, else None."""
        d0 = self.domains[0]
        if any(d != d0 for d in self.domains):
            return None
        n = self.n_domains
        off = ~np.eye(n, dtype=bool)
        lam_vals = self.lambda_matrix[off]
        p_vals = self.p_matrix[off]
        if n > 1 and (np.ptp(lam_vals) != 0 or np.ptp(p_vals) != 0):
            return None
        if self.omega.size and np.ptp(self.omega) != 0:
            return None
        return {
            "n_domains": n,
            "alpha": d0.alpha,
            "gamma_q": d0.gamma_q,
            "gamma_g": d0.gamma_g,
            "kappa": d0.kappa,
            "beta": self.beta,
            "lam": float(lam_vals[0]) if n > 1 else 0.0,
            "p_bar": float(p_vals[0]) if n > 1 else 0.0,
            "m_consumers": self.m_consumers,
            "omega": float(self.omega.flat[0]) if self.omega.size else 0.0,
            "switching_cost": self.switching_cost,
            "tau": self.tau,
        }

    @property
    def is_symmetric(self) -> bool:
        return self.symmetric_params() is not None

    def with_n_domains(self, n: int) -> "Scenario":
        params = self.symmetric_params()
        if params is None:
            raise DomainError("only symmetric scenarios can be re-instantiated at a new N")
        params["n_domains"] = n
        return Scenario.symmetric(**params, allow_single_domain=self.allow_single_domain)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.domains == other.domains
            and self.beta == other.beta
            and self.switching_cost == other.switching_cost
            and self.tau == other.tau
            and np.array_equal(self.lambda_matrix, other.lambda_matrix)
            and np.array_equal(self.omega, other.omega)
            and np.array_equal(self.p_matrix, other.p_matrix)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Profile:
    """Strategy vector (q_i, g_i) for every domain."""

    q: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        g = np.array(self.g, dtype=float).reshape(-1)
        if q.shape != g.shape:
            raise DomainError(f"q and g lengths differ: {q.size} vs {g.size}")
        _check_unit("q", q)
        _check_unit("g", g)
        q.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "g", g)

    @classmethod
    def uniform(cls, n: int, q: float, g: float) -> "Profile":
        return cls(np.full(n, q), np.full(n, g))

    def __len__(self):
        return self.q.size

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return np.array_equal(self.q, other.q) and np.array_equal(self.g, other.g)

    __hash__ = None


def _check_profile(s: Scenario, p: Profile) -> None:
    if len(p) != s.n_domains:
        raise DomainError(f"profile has {len(p)} domains, scenario has {s.n_domains}")


def _check_index(i: int, n: int, what: str) -> None:
    if not 0 <= i < n:
        raise IndexError(f"{what} index {i} out of range [0, {n})")


# -- primitives ---------------------------------------------------------------


def cost(d: DomainParams, q, g):
    """(gamma_q/2) q^2 + (gamma_g/2) g^2 q + kappa g. Accepts arrays."""
    _check_unit("q", q)
    _check_unit("g", g)
    return 0.5 * d.gamma_q * q * q + 0.5 * d.gamma_g * g * g * q + d.kappa * g


def own_benefit(d: DomainParams, beta: float, q, g):
    """alpha q (1 + beta g). Accepts arrays."""
    _check_unit("q", q)
    _check_unit("g", g)
    return d.alpha * q * (1.0 + beta * g)


def cross_benefit(s: Scenario, p: Profile, i: int) -> float:
    """Value domain i draws from the other domains' general products."""
    _check_index(i, s.n_domains, "domain")
    _check_profile(s, p)
    row = s.lambda_matrix[i]
    qg = p.q * p.g
    return float(sum(row[j] * qg[j] for j in range(s.n_domains) if j != i))


def consumer_utility(s: Scenario, p: Profile, j: int) -> float:
    _check_index(j, s.m_consumers, "consumer")
    _check_profile(s, p)
    return float(np.dot(s.omega[j], p.q * p.g) - s.switching_cost * np.sum(1.0 - p.g))


def domain_profit(s: Scenario, p: Profile, i: int) -> float:
    _check_index(i, s.n_domains, "domain")
    d = s.domains[i]
    q, g = p.q[i], p.g[i]
    return float(own_benefit(d, s.beta, q, g) + cross_benefit(s, p, i) - cost(d, q, g))


def total_welfare(s: Scenario, p: Profile) -> float:
    """Sum of domain profits plus consumer utilities; 0 consumer surplus when M = 0."""
    _check_profile(s, p)
    profits = sum(domain_profit(s, p, i) for i in range(s.n_domains))
    surplus = sum(consumer_utility(s, p, j) for j in range(s.m_consumers))
    return float(profits + surplus)


def welfare_contributions(s: Scenario, q: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Per-domain additive pieces of total welfare, vectorized.

    Welfare is separable across domains: everything that depends on
    (q_i, g_i) is collected into entry i. Used by the solvers; the scalar
    primitives above remain the reference definition.
    """
    q = np.asarray(q, dtype=float)
    g = np.asarray(g, dtype=float)
    own = s.alpha * q * (1.0 + s.beta * g)
    c = 0.5 * s.gamma_q * q * q + 0.5 * s.gamma_g * g * g * q + s.kappa * g
    ext = (s.externality + s.consumer_weight) * q * g
    switching = -s.m_consumers * s.switching_cost * (1.0 - g)
    return own - c + ext + switching
