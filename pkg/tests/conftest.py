import pytest
from hypothesis import HealthCheck, settings

from simmabv.noise_models import FiniteAtoms, Stable, TabulatedTail, TemperedStable

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def stable15():
    return Stable(1, 1, 1.5)


@pytest.fixture
def tempered12():
    return TemperedStable(1, 1, 1.2, 1, 1)


@pytest.fixture
def tempered15():
    return TemperedStable(1, 1, 1.5, 1, 1)


@pytest.fixture
def pm_atoms():
    return FiniteAtoms(((1.0, 1.0), (-1.0, 1.0)))


@pytest.fixture
def tabulated_stable():
    # tail of Stable(1, 1, 1.5) sampled on a grid: g(r) = (4/3) r^{-1.5}
    r = tuple(10.0 ** k for k in range(-3, 4))
    return TabulatedTail(r, tuple(4 / 3 * v ** -1.5 for v in r), tail_exponent=-1.5)


def levy_families():
    return [Stable(1, 1, 1.5), Stable(2, 0.5, 1.2), TemperedStable(1, 1, 1.5, 1, 1),
            TemperedStable(1, 2, 0.7, 0.5, 2), FiniteAtoms(((2.0, 3.0), (-0.5, 1.0))),
            TabulatedTail((0.1, 1.0, 10.0), (30.0, 1.0, 0.03), tail_exponent=-1.5)]
