import pytest
from hypothesis import HealthCheck, settings

from u11.arith import LocalRing, PrimeCtx

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def F3():
    return PrimeCtx(3)


@pytest.fixture
def F9():
    return PrimeCtx(3, 2)


@pytest.fixture
def ram9():
    # (Z/9)[w]/(w^2 - 3)
    return LocalRing(3, 2, (-3, 0, 1))


def lam_generic(ctx):
    """Some lambda with lambda^2 != 1."""
    return next(x for x in ctx.nonzero() if x * x != 1)
