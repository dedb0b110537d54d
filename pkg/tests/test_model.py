import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import domain_params, profiles, scenarios
from meshtrap.model import (
    DomainError,
    DomainParams,
    Profile,
    Scenario,
    consumer_utility,
    cost,
    cross_benefit,
    domain_profit,
    own_benefit,
    total_welfare,
    welfare_contributions,
)

ATOL = 1e-9
BASE_DOMAIN = DomainParams(alpha=0.5, gamma_q=0.8333, gamma_g=0.4, kappa=0.25)


# -- construction ---------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha=0.0, gamma_q=1, gamma_g=1, kappa=0),
        dict(alpha=1, gamma_q=-1, gamma_g=1, kappa=0),
        dict(alpha=1, gamma_q=1, gamma_g=0, kappa=0),
        dict(alpha=1, gamma_q=1, gamma_g=1, kappa=-0.1),
        dict(alpha=float("nan"), gamma_q=1, gamma_g=1, kappa=0),
    ],
)
def test_domain_params_rejects_invalid(kwargs):
    with pytest.raises(DomainError):
        DomainParams(**kwargs)


def test_scenario_rejects_bad_shapes_and_ranges():
    d = (BASE_DOMAIN,) * 3
    with pytest.raises(DomainError):
        Scenario(d, 0.1, np.zeros((2, 2)), np.zeros((0, 3)))
    with pytest.raises(DomainError):
        Scenario(d, 0.1, -np.ones((3, 3)), np.zeros((0, 3)))
    with pytest.raises(DomainError):
        Scenario(d, 0.1, np.zeros((3, 3)), np.zeros((2, 4)))
    with pytest.raises(DomainError):
        Scenario(d, 0.1, np.zeros((3, 3)), np.zeros((0, 3)), p_matrix=np.full((3, 3), 1.5))
    with pytest.raises(DomainError):
        Scenario((BASE_DOMAIN,), 0.1, np.zeros((1, 1)), np.zeros((0, 1)))


def test_single_domain_only_when_allowed():
    s = Scenario.symmetric(1, 0.5, 0.8333, 0.4, 0.25, 0.15, 0.4, allow_single_domain=True)
    assert s.n_domains == 1


def test_scenario_is_immutable(baseline):
    with pytest.raises(ValueError):
        baseline.lambda_matrix[0, 1] = 5.0
    with pytest.raises(Exception):
        baseline.beta = 0.3


def test_symmetric_constructor_round_trips(baseline):
    params = baseline.symmetric_params()
    assert params["n_domains"] == 12 and params["lam"] == 0.4 and params["p_bar"] == 0.5
    assert baseline.is_symmetric
    assert Scenario.symmetric(**params) == baseline
    expanded = Scenario(
        domains=baseline.domains,
        beta=baseline.beta,
        lambda_matrix=np.array(baseline.lambda_matrix),
        omega=np.array(baseline.omega),
        switching_cost=baseline.switching_cost,
        tau=baseline.tau,
        p_matrix=np.array(baseline.p_matrix),
    )
    assert expanded == baseline and expanded.is_symmetric


def test_asymmetric_scenario_not_symmetric(baseline):
    lam = np.array(baseline.lambda_matrix)
    lam[0, 3] = 0.9
    assert not baseline.replace(lambda_matrix=lam).is_symmetric


def test_diagonals_are_zeroed():
    s = Scenario((BASE_DOMAIN,) * 2, 0.1, np.ones((2, 2)), np.zeros((0, 2)), p_matrix=np.ones((2, 2)))
    assert s.lambda_matrix[0, 0] == 0 and s.p_matrix[1, 1] == 0


def test_profile_validation():
    with pytest.raises(DomainError):
        Profile([0.5, 1.2], [0, 0])
    with pytest.raises(DomainError):
        Profile([0.5], [0, 0])
    p = Profile.uniform(3, 0.6, 0.0)
    assert len(p) == 3 and p == Profile([0.6] * 3, [0.0] * 3)


# -- primitives: examples ---------------------------------------------------------


def test_cost_examples():
    # 0.8333/2 * 0.36 = 0.149994 (gamma_q is rounded from 5/6)
    assert cost(BASE_DOMAIN, 0.6, 0.0) == pytest.approx(0.8333 / 2 * 0.36, abs=ATOL)
    assert cost(BASE_DOMAIN, 0.6, 0.0) == pytest.approx(0.15, abs=1e-4)
    assert cost(BASE_DOMAIN, 0.0, 0.0) == 0.0
    assert cost(DomainParams(1.0, 2.0, 2.0, 1.0), 1.0, 1.0) == pytest.approx(3.0, abs=ATOL)


@pytest.mark.parametrize("q,g", [(-0.1, 0.0), (0.5, 1.01), (1.5, 0.2)])
def test_primitives_reject_out_of_range(q, g):
    with pytest.raises(DomainError):
        cost(BASE_DOMAIN, q, g)
    with pytest.raises(DomainError):
        own_benefit(BASE_DOMAIN, 0.15, q, g)


def test_own_benefit_examples():
    assert own_benefit(BASE_DOMAIN, 0.15, 0.6, 0.0) == pytest.approx(0.30, abs=ATOL)
    assert own_benefit(BASE_DOMAIN, 0.15, 0.0, 0.7) == 0.0
    assert own_benefit(DomainParams(1.0, 1, 1, 0), 0.0, 0.7, 0.9) == pytest.approx(0.7, abs=ATOL)


def test_cross_benefit_examples():
    s3 = Scenario.symmetric(3, 0.5, 0.8333, 0.4, 0.25, 0.15, 0.4)
    assert cross_benefit(s3, Profile([0.5] * 3, [0.0] * 3), 0) == 0.0
    assert cross_benefit(s3, Profile([0.9, 0.5, 0.5], [0.3, 1.0, 1.0]), 0) == pytest.approx(0.4, abs=ATOL)

    lam = np.array([[0.0, 0.7], [0.0, 0.0]])  # domain 0 values domain 1's product at 0.7
    s2 = Scenario((BASE_DOMAIN,) * 2, 0.15, lam, np.zeros((0, 2)))
    assert cross_benefit(s2, Profile([0.3, 0.5], [0.1, 0.2]), 0) == pytest.approx(0.07, abs=ATOL)
    with pytest.raises(IndexError):
        cross_benefit(s2, Profile([0.3, 0.5], [0.1, 0.2]), 2)


def test_consumer_utility_examples():
    s = Scenario.symmetric(4, 0.5, 1.0, 0.4, 0.25, 0.15, 0.4, m_consumers=2, omega=1.0, switching_cost=0.3)
    assert consumer_utility(s, Profile.uniform(4, 1.0, 1.0), 0) == pytest.approx(4.0, abs=ATOL)
    s12 = Scenario.symmetric(12, 0.5, 1.0, 0.4, 0.25, 0.15, 0.4, m_consumers=1, omega=0.2, switching_cost=0.1)
    assert consumer_utility(s12, Profile.uniform(12, 0.6, 0.0), 0) == pytest.approx(-1.2, abs=ATOL)
    s0 = Scenario.symmetric(4, 0.5, 1.0, 0.4, 0.25, 0.15, 0.4)
    with pytest.raises(IndexError):
        consumer_utility(s0, Profile.uniform(4, 1.0, 1.0), 0)


def test_domain_profit_examples(baseline):
    p = Profile.uniform(12, 0.6, 0.0)
    assert domain_profit(baseline, p, 3) == pytest.approx(0.30 - 0.8333 * 0.18, abs=ATOL)
    assert domain_profit(baseline, p, 3) == pytest.approx(0.15, abs=1e-4)
    assert domain_profit(baseline, Profile.uniform(12, 0.0, 0.0), 0) == 0.0

    before = Profile.uniform(12, 0.6, 0.2)
    g = before.g.copy()
    g[5] = 0.5
    assert domain_profit(baseline, Profile(before.q, g), 0) > domain_profit(baseline, before, 0)


def test_total_welfare_examples(baseline):
    p = Profile.uniform(12, 0.6, 0.0)
    assert total_welfare(baseline, p) == pytest.approx(12 * (0.30 - 0.8333 * 0.18), abs=ATOL)
    assert total_welfare(baseline, p) == pytest.approx(1.8, abs=1e-3)
    s0 = baseline.replace(switching_cost=0.0)
    assert total_welfare(s0, Profile.uniform(12, 0.0, 0.0)) == 0.0


# -- properties ----------------------------------------------------------------------


def test_cost_monotone_on_random_draws():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        d = DomainParams(rng.uniform(0.01, 2), rng.uniform(0.01, 3), rng.uniform(0.01, 3), rng.uniform(0, 1))
        q0, g0 = rng.uniform(0, 1, 2)
        dq, dg = rng.uniform(0, 1, 2)
        q1, g1 = min(1.0, q0 + dq * (1 - q0)), min(1.0, g0 + dg * (1 - g0))
        assert cost(d, q1, g0) >= cost(d, q0, g0)
        assert cost(d, q0, g1) >= cost(d, q0, g0)
        assert cost(d, q0, g0) >= 0


@given(domain_params(), st.floats(0.0, 1.0), st.floats(0.01, 1.0), st.floats(0, 1))
def test_profit_concave_in_own_generality(d, beta, q, g):
    s = Scenario((d, d), beta, np.zeros((2, 2)), np.zeros((0, 2)))
    h = 1e-3
    g = min(max(g, h), 1 - h)

    def pi(gi):
        return domain_profit(s, Profile([q, 0.5], [gi, 0.5]), 0)

    second = (pi(g + h) - 2 * pi(g) + pi(g - h)) / h**2
    assert second <= 1e-6
    assert second == pytest.approx(-d.gamma_g * q, abs=1e-5)


@given(scenarios(), st.data())
@settings(max_examples=50)
def test_cross_benefit_ignores_own_strategy(s, data):
    q, g = data.draw(profiles(s.n_domains))
    i = data.draw(st.integers(0, s.n_domains - 1))
    q2, g2 = q.copy(), g.copy()
    q2[i], g2[i] = data.draw(st.floats(0, 1)), data.draw(st.floats(0, 1))
    assert cross_benefit(s, Profile(q, g), i) == cross_benefit(s, Profile(q2, g2), i)


@given(st.integers(2, 8), st.floats(0, 1), st.floats(0, 1))
def test_symmetric_scenarios_give_identical_profits(n, q, g):
    s = Scenario.symmetric(n, 0.5, 0.8333, 0.4, 0.25, 0.15, 0.4, m_consumers=2, omega=0.1, switching_cost=0.05)
    p = Profile.uniform(n, q, g)
    profits = [domain_profit(s, p, i) for i in range(n)]
    assert max(profits) - min(profits) <= 1e-12


@given(scenarios(), st.data())
@settings(max_examples=50)
def test_welfare_contributions_sum_to_total_welfare(s, data):
    q, g = data.draw(profiles(s.n_domains))
    assert_allclose(np.sum(welfare_contributions(s, q, g)), total_welfare(s, Profile(q, g)), atol=1e-9)
