import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bracketprob import build_matrices, build_schedule, builtin_schedules, bundled_config

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def men_config():
    return bundled_config("men-2022")


@pytest.fixture(scope="session")
def women_config():
    return bundled_config("women-2023")


@pytest.fixture(scope="session")
def men_matrices(men_config):
    return men_config.build_matrices()


@pytest.fixture(scope="session")
def women_matrices(women_config):
    return women_config.build_matrices()


@pytest.fixture(scope="session")
def schedules():
    return builtin_schedules()


@pytest.fixture(scope="session")
def equal_matrices():
    return build_matrices(np.full(32, 1500.0), sigma=360.0)


@pytest.fixture(scope="session")
def mini_schedule():
    return build_schedule("mini", num_groups=2)


def random_ratings(seed: int, n: int, spread: float = 500.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return 1500.0 + spread * rng.standard_normal(n)


@pytest.fixture(scope="session")
def mini_matrices():
    return build_matrices(random_ratings(11, 8), sigma=300.0)
