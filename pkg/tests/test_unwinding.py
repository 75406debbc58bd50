import math

import numpy as np
import pytest

from holophase.errors import DegenerateInputError, DomainError
from holophase.numerics import CircleGrid, LineGrid, Signal, hardy_project, winding_number
from holophase.unwinding import (
    UnwindingError,
    circle_from_halfplane,
    exp_2ipi_over_x,
    g_truncated_product,
    remarkable_series,
    remarkable_series_error,
    unwind,
    weiss_factorize,
)
from holophase.suites import random_disk_polynomial

GRID = CircleGrid(1024)
Z = GRID.points


def test_monomial_times_constant():
    B, G, floored = weiss_factorize(Signal(GRID, 2 * Z))
    assert np.max(np.abs(B.samples - Z)) < 1e-12
    assert np.max(np.abs(G.samples - 2)) < 1e-12
    assert floored == 0


def test_linear_factor():
    B, G, _ = weiss_factorize(Signal(GRID, Z - 0.5))
    assert np.max(np.abs(B.samples - (Z - 0.5) / (1 - Z / 2))) < 1e-12
    assert np.max(np.abs(G.samples - (1 - Z / 2))) < 1e-12


def test_outer_input():
    B, G, _ = weiss_factorize(Signal(GRID, np.exp(Z)))
    assert np.max(np.abs(B.samples - 1)) < 1e-8
    assert np.max(np.abs(G.samples - np.exp(Z))) < 1e-8


def test_degenerate_and_domain():
    with pytest.raises(DegenerateInputError):
        weiss_factorize(Signal(GRID, np.zeros(1024)))
    with pytest.raises(DomainError):
        weiss_factorize(Signal(LineGrid(8.0, 64), np.ones(64)))
    with pytest.raises(UnwindingError) as info:
        unwind(Signal(GRID, np.zeros(1024)))
    assert info.value.level == 1


def test_floor_is_reported():
    # a zero sitting exactly on a grid point
    F = Signal(GRID, Z - 1.0)
    _, _, floored = weiss_factorize(F)
    assert floored == 1


def test_known_finite_blaschke(rng):
    a = 0.8 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    B = np.prod((Z[:, None] - a) / (1 - a.conj() * Z[:, None]), axis=1)
    G = np.exp(0.3 * Z) * (2 + Z)
    got = weiss_factorize(Signal(GRID, B * G)).blaschke.samples
    assert np.max(np.abs(got - B)) < 1e-6


def test_unwind_degree_two():
    # F = z (z - 1/2): a_1 = 1, B_1 = z (z-1/2)/(1-z/2); then -z/2 = (1/2)(-z)
    res = unwind(Signal(GRID, Z * (Z - 0.5)), depth=4)
    assert len(res.levels) == 2 and res.stop_reason == "tolerance"
    assert np.allclose(res.coefficients, [1.0, 0.5], atol=1e-12)
    assert np.max(np.abs(res.levels[0].blaschke.samples - Z * (Z - 0.5) / (1 - Z / 2))) < 1e-12
    assert np.max(np.abs(res.levels[1].blaschke.samples + Z)) < 1e-12
    assert np.max(np.abs(res.partial_sum().samples - Z * (Z - 0.5))) < 1e-12


def test_unwind_trivial_cases():
    r = unwind(Signal(GRID, Z), depth=3)
    assert np.allclose(r.coefficients, [1]) and r.residual.energy() < 1e-24
    assert np.max(np.abs(r.levels[0].blaschke.samples - Z)) < 1e-12
    c = 0.3 - 2j
    r = unwind(Signal(GRID, np.full(1024, c)), depth=3)
    # the outer factor is normalized positive at the origin, so the phase
    # of the constant sits in the (degree zero) Blaschke factor
    assert np.allclose(r.coefficients, [abs(c)]) and r.residual.energy() < 1e-24
    assert np.max(np.abs(r.levels[0].blaschke.samples - c / abs(c))) < 1e-12


def test_reconstruction_and_energy(rng):
    for _ in range(10):
        a, lead = random_disk_polynomial(rng)
        F = Signal(GRID, lead * np.prod(Z[:, None] - a, axis=1))
        res = unwind(F, 32)
        total = np.sum(np.abs(res.coefficients) ** 2) + res.residual.energy()
        assert abs(total - F.energy()) < 1e-6 * F.energy()
        rebuilt = res.partial_sum().samples + res.residual.samples
        assert np.max(np.abs(rebuilt - F.samples)) < 1e-8 * np.max(np.abs(F.samples))
        unimod = [np.max(np.abs(np.abs(lv.blaschke.samples) - 1)) for lv in res.levels]
        assert unimod[0] < 1e-8
        # deep levels factor tiny residuals and lose a few digits
        assert max(unimod) < 1e-6
        energies = res.energies
        tails = [sum(energies[k:]) for k in range(len(energies))]
        assert np.all(np.diff(tails) <= 1e-12 * F.energy())


def test_winding_per_level(rng):
    for _ in range(10):
        a, lead = random_disk_polynomial(rng)
        F = Signal(GRID, lead * np.prod(Z[:, None] - a, axis=1))
        w = [lv.winding for lv in unwind(F, 32).levels]
        assert w[0] == len(a)
        # every later level factors G - G(0), which vanishes at the origin
        assert all(1 <= x <= len(a) for x in w[1:])


def test_circle_from_halfplane():
    s = circle_from_halfplane(lambda w: 1.0 / (w + 1j), GRID)
    assert np.max(np.abs(s.samples - 1 / 2j)) < 1e-12
    # Hardy functions of the half-plane land in the Hardy space of the disk
    s = circle_from_halfplane(lambda w: 1.0 / (w + 2j) ** 2, GRID)
    assert np.max(np.abs(hardy_project(s).samples - s.samples)) < 1e-10


def test_g_truncated_product_tail():
    x = np.linspace(-10, 10, 401)
    closed = np.sin(np.pi * (1j - x)) / np.sin(np.pi * (1j + x))
    assert np.max(np.abs(g_truncated_product(x, 200) - closed)) < 1e-12
    bare = np.max(np.abs(g_truncated_product(x, 200, tail=False) - closed))
    assert 1e-3 < bare < 4 * 10 / 200 * 1.5
    xc = x + 0.3j
    closed_c = np.sin(np.pi * (1j - xc)) / np.sin(np.pi * (1j + xc))
    assert np.max(np.abs(g_truncated_product(xc, 300) - closed_c)) < 1e-10


def test_remarkable_series_examples():
    x = np.linspace(0.1, 10, 500)
    q = math.exp(-2 * math.pi)
    assert np.allclose(remarkable_series(x, 0), q)
    assert abs(q - 1.8674e-3) < 1e-7
    bound = q + (1 - q * q) / (1 - q)
    for N in (1, 3, 6):
        assert np.max(np.abs(remarkable_series(x, N))) <= bound + 1e-12
    errs = [remarkable_series_error(x, N) for N in range(7)]
    ratios = [errs[k] / errs[k - 1] / q for k in range(1, 6)]
    assert all(0.9 <= r <= 1.1 for r in ratios)
    assert errs[6] < 1e-6
    with pytest.raises(DomainError):
        remarkable_series(np.array([0.0, 1.0]), 2)


def test_exp_reduction():
    x = np.array([1e-3, 0.5, 3.0])
    assert np.allclose(exp_2ipi_over_x(x), np.exp(2j * np.pi / x), atol=1e-10)


def test_winding_number_of_outer_part(rng):
    a, lead = random_disk_polynomial(rng)
    F = Signal(CircleGrid(4096), lead * np.prod(CircleGrid(4096).points[:, None] - a, axis=1))
    assert winding_number(weiss_factorize(F).outer.samples) == 0
