import numpy as np
import pytest
from hypothesis import strategies as st

from meshtrap.calibration import baseline_scenario
from meshtrap.model import DomainParams, Scenario


@pytest.fixture
def baseline():
    return baseline_scenario()


@st.composite
def domain_params(draw, kappa_max=0.4):
    return DomainParams(
        alpha=draw(st.floats(0.05, 1.5)),
        gamma_q=draw(st.floats(0.3, 3.0)),
        gamma_g=draw(st.floats(0.1, 2.0)),
        kappa=draw(st.floats(0.0, kappa_max)),
    )


@st.composite
def scenarios(draw, max_domains=6, max_consumers=3):
    n = draw(st.integers(2, max_domains))
    m = draw(st.integers(0, max_consumers))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return Scenario(
        domains=tuple(draw(domain_params()) for _ in range(n)),
        beta=draw(st.floats(0.0, 1.0)),
        lambda_matrix=rng.uniform(0.0, 0.8, (n, n)),
        omega=rng.uniform(0.0, 0.3, (m, n)),
        switching_cost=draw(st.floats(0.0, 0.2)),
        tau=draw(st.floats(0.0, 2.0)),
        p_matrix=rng.uniform(0.0, 1.0, (n, n)),
    )


@st.composite
def profiles(draw, n):
    unit = st.floats(0.0, 1.0)
    return np.array(draw(st.lists(unit, min_size=n, max_size=n))), np.array(
        draw(st.lists(unit, min_size=n, max_size=n))
    )
