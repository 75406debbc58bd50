import math

import numpy as np
import pytest
from scipy.special import gamma as sp_gamma, jv

from holophase.errors import DomainError, SingularityError, SizeError
from holophase.numerics import (
    CircleGrid,
    LineGrid,
    Signal,
    bessel_j,
    cayley,
    complex_gamma,
    dft,
    gauss_legendre,
    hardy_project,
    idft,
    inner_product,
    legendre,
    line_integral,
    winding_number,
)


def test_grid_validation():
    with pytest.raises(SizeError):
        CircleGrid(12)
    with pytest.raises(SizeError):
        CircleGrid(4)
    with pytest.raises(SizeError):
        LineGrid(-1.0, 64)
    g = LineGrid(4.0, 16)
    assert g.points[0] == -4.0
    assert np.isclose(g.spacing, 0.5)
    assert np.isclose(g.frequencies[1], 1 / 8)


def test_signal_rejects_bad_samples():
    with pytest.raises(SizeError):
        Signal(CircleGrid(8), np.ones(7))
    with pytest.raises(DomainError):
        Signal(CircleGrid(8), np.array([np.nan] + [0] * 7))


def test_dft_impulse_and_tone():
    g = CircleGrid(8)
    delta = np.zeros(8)
    delta[0] = 1
    assert np.allclose(dft(Signal(g, delta)).coefficients, 1 / math.sqrt(8))
    tone = dft(Signal(g, np.exp(1j * g.angles))).coefficients
    expect = np.zeros(8, complex)
    expect[1] = math.sqrt(8)
    assert np.allclose(tone, expect, atol=1e-14)


def test_dft_round_trip(rng):
    g = CircleGrid(256)
    s = Signal(g, rng.normal(size=256) + 1j * rng.normal(size=256))
    assert np.max(np.abs(idft(dft(s)).samples - s.samples)) < 1e-12


def test_parseval_many(rng):
    g = CircleGrid(128)
    for _ in range(100):
        s = rng.normal(size=128) + 1j * rng.normal(size=128)
        c = dft(Signal(g, s)).coefficients
        assert abs(np.sum(np.abs(c) ** 2) - np.sum(np.abs(s) ** 2)) < 1e-12 * np.sum(np.abs(s) ** 2)


def test_hardy_projection_examples():
    g = CircleGrid(64)
    e = np.exp(1j * g.angles)
    assert np.allclose(hardy_project(Signal(g, e)).samples, e)
    assert np.allclose(hardy_project(Signal(g, e.conj())).samples, 0, atol=1e-15)
    # mode 0 kept in full
    cosine = hardy_project(Signal(g, np.cos(g.angles) + 1.0)).samples
    assert np.allclose(cosine, 0.5 * e + 1.0)


def test_hardy_projection_self_adjoint(rng):
    g = CircleGrid(128)
    a = Signal(g, rng.normal(size=128) + 1j * rng.normal(size=128))
    b = Signal(g, rng.normal(size=128) + 1j * rng.normal(size=128))
    lhs = inner_product(hardy_project(a), b)
    rhs = inner_product(a, hardy_project(b))
    assert abs(lhs - rhs) < 1e-10


def test_hardy_projection_line():
    grid = LineGrid(64.0, 4096)
    f = 1.0 / (grid.points + 1j) ** 3
    # spectrum on the positive axis only; the error is the window's periodization
    out = hardy_project(Signal(grid, f)).samples
    assert np.max(np.abs(out - f)) < 2e-5
    assert np.max(np.abs(hardy_project(Signal(grid, f.conj())).samples)) < 2e-5


def test_cayley_examples():
    assert np.isclose(cayley(0), 1j)
    assert np.isclose(cayley(1), 0)
    assert np.isclose(cayley(1j), 1)
    with pytest.raises(SingularityError):
        cayley(-1)
    with pytest.raises(SingularityError):
        cayley(-1j, inverse=True)


def test_cayley_round_trip(rng):
    z = np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000)) * 0.999
    w = cayley(z)
    assert np.all(w.imag > 0)
    assert np.max(np.abs(cayley(w, inverse=True) - z)) < 1e-12


def test_gamma_values():
    assert abs(complex_gamma(1) - 1) < 1e-14
    assert abs(complex_gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    assert abs(abs(complex_gamma(1j)) ** 2 - math.pi / math.sinh(math.pi)) < 1e-13
    with pytest.raises(SingularityError):
        complex_gamma(-3)


def test_gamma_accuracy_box(rng):
    z = rng.uniform(-20, 20, 400) + 1j * rng.uniform(-20, 20, 400)
    # compare the recurrence and, on the real axis, scipy
    rel = np.abs(complex_gamma(z + 1) / (z * complex_gamma(z)) - 1)
    assert rel.max() < 1e-9
    x = rng.uniform(-19.5, 20, 200)
    x = x[np.abs(x - np.round(x)) > 1e-3]
    assert np.max(np.abs(complex_gamma(x) / sp_gamma(x) - 1)) < 1e-10


def test_legendre_examples_and_orthogonality():
    assert legendre(0, 0.3) == 1
    assert legendre(1, -0.5) == -0.5
    assert abs(legendre(2, 0.5) + 0.125) < 1e-15
    assert abs(legendre(7, 1.0) - 1) < 1e-14
    x, w = gauss_legendre(40)
    for n in range(6):
        for m in range(6):
            val = np.sum(w * legendre(n, x) * legendre(m, x))
            assert abs(val - (2 / (2 * n + 1) if n == m else 0)) < 1e-8
    with pytest.raises(DomainError):
        legendre(2, 1.1)


def test_bessel_oracle():
    assert abs(bessel_j(0, 0.0) - 1) < 1e-15
    assert abs(bessel_j(1, 0.0)) < 1e-15
    assert abs(bessel_j(0, 2.404825557)) < 1e-6
    x = np.linspace(0, 40, 81)
    for k in range(5):
        assert np.max(np.abs(bessel_j(k, x) - jv(k, x))) < 1e-8


def test_inner_product_examples():
    g = CircleGrid(64)
    e1 = Signal(g, np.exp(1j * g.angles))
    e2 = Signal(g, np.exp(2j * g.angles))
    assert abs(inner_product(e1, e1) - 1) < 1e-14
    assert abs(inner_product(e1, e2)) < 1e-14
    L = 64.0
    line = LineGrid(L, 8192)
    f = Signal(line, 1.0 / (line.points + 1j))
    tail = math.pi - 2 * math.atan(L)
    assert abs(inner_product(f, f).real - (math.pi - tail)) < 1e-3 * tail
    with pytest.raises(SizeError):
        inner_product(e1, Signal(CircleGrid(32), np.ones(32)))


def test_line_integral_tails():
    grid = LineGrid(16.0, 1024)
    total, tail = line_integral(lambda x: 1.0 / (x * x + 1.0), grid)
    assert abs(total - math.pi) < 1e-10
    assert abs(tail - (math.pi - 2 * math.atan(16.0))) < 1e-10


def test_winding_number():
    t = 2 * np.pi * np.arange(256) / 256
    assert winding_number(np.exp(3j * t)) == 3
    assert winding_number(2 + np.exp(1j * t)) == 0
