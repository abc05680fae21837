import random

import pytest
from hypothesis import HealthCheck, settings

from toric_cke.fan import bundle_fan
from toric_cke.fixtures import NINE_RAY_FAN

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("repo")


def random_unimodular(n, rng, steps=12, bound=2):
    """Product of random elementary matrices and a signed permutation."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.choice([k for k in range(-bound, bound + 1) if k])
        for col in range(n):
            a[i][col] += f * a[j][col]
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(n)]
    return [[s * x for x in a[p]] for p, s in zip(perm, signs)]


@pytest.fixture(scope="session")
def fan5():
    return bundle_fan(3, 1)


@pytest.fixture(scope="session")
def fan6():
    return bundle_fan(3, 2)


@pytest.fixture(scope="session")
def fan4():
    return bundle_fan(1, 2)


@pytest.fixture(scope="session")
def nine_ray_fan():
    return NINE_RAY_FAN


@pytest.fixture
def rng():
    return random.Random(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
