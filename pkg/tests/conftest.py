import functools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from ietlab.core import Iet, Permutation
from ietlab.instances import find_periodic_loop, golden_iet

settings.register_profile("ietlab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ietlab")


@functools.lru_cache(maxsize=None)
def _periodic():
    return find_periodic_loop()


@pytest.fixture(scope="session")
def periodic():
    """d=3 periodic-type instance with a unit-eigenvalue central vector."""
    return _periodic()


@pytest.fixture(scope="session")
def golden():
    return golden_iet()


@pytest.fixture
def rot23():
    return Iet(Permutation("AB", "BA"), [Fraction(2, 3), Fraction(1, 3)])


def first_return(T, x, L, cap=10**6):
    """Brute force: (T^r x, r) with r the first return time of x to [0, L)."""
    y = T(x)
    r = 1
    while not y < L:
        y = T(y)
        r += 1
        if r > cap:
            raise RuntimeError("no return")
    return y, r
