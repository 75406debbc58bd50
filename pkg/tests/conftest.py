import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))


def _second_differences(f, p, h):
    p = np.asarray(p, dtype=float)
    c = f(p)
    out = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        out.append((f(p + e) + f(p - e) - 2 * c) / h**2)
    return out


def harmonicity_defect(f, p, h):
    """Richardson-extrapolated 5-point Laplacian (steps h and h/2) relative to
    the size of the individual second differences plus ``|f(p)|``.

    The value term keeps the measure finite for functions that are linear in
    every variable, whose second differences are pure rounding.
    """
    coarse = _second_differences(f, p, h)
    fine = _second_differences(f, p, h / 2)
    lap = (4 * sum(fine) - sum(coarse)) / 3
    return abs(lap) / (sum(abs(d) for d in fine) + abs(f(np.asarray(p, dtype=float))))


@pytest.fixture
def harmonicity():
    return harmonicity_defect
