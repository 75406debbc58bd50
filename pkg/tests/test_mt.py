import math

import numpy as np
import pytest

from holophase.blaschke import BlaschkeSpec, eval_blaschke
from holophase.errors import DomainError, SingularityError
from holophase.mt import (
    MTBasisSpec,
    mt_analyze,
    mt_function,
    mt_gram,
    mt_matrix,
    mt_synthesize,
    repeated_pole_form,
)
from holophase.numerics import LineGrid, Signal, line_integral

GRID = LineGrid(256.0, 2**15)


def random_spec(rng, n=8):
    return MTBasisSpec.of(rng.uniform(-3, 3, n) + 1j * rng.uniform(0.2, 3, n))


def test_spec_validation():
    with pytest.raises(DomainError):
        MTBasisSpec.of([1.0])
    with pytest.raises(IndexError):
        mt_function(MTBasisSpec.of([1j]), 1, 0.0)
    with pytest.raises(SingularityError):
        mt_function(MTBasisSpec.of([1j]), 0, -1j)


def test_function_examples():
    one = MTBasisSpec.of([1j])
    assert abs(mt_function(one, 0, 0.0) - (-1j / math.sqrt(math.pi))) < 1e-15
    two = MTBasisSpec.of([1j, 1j])
    assert abs(mt_function(two, 1, 0.0) - 1j / math.sqrt(math.pi)) < 1e-15


def test_unnormalized_switch():
    spec = MTBasisSpec.of([2 + 0.5j])
    x = np.linspace(-5, 5, 11)
    ratio = mt_function(spec, 0, x, normalized=False) / mt_function(spec, 0, x)
    assert np.allclose(ratio, 1 / math.sqrt(0.5))


def test_norm_within_window_tail():
    L = 64.0
    grid = LineGrid(L, 8192)
    phi = Signal(grid, mt_function(MTBasisSpec.of([1j]), 0, grid.points))
    assert abs(phi.energy() - 1) < 2 / L


def test_matrix_matches_function(rng):
    spec = random_spec(rng, 5)
    x = np.linspace(-4, 4, 9)
    M = mt_matrix(spec, x)
    for n in range(5):
        assert np.allclose(M[n], mt_function(spec, n, x))


def test_analysis_examples(rng):
    spec = random_spec(rng, 6)
    basis = mt_matrix(spec, GRID.points)
    for target, f in [((1, 0), basis[0]), ((0, 1), basis[1]),
                      ((2**-0.5, 2**-0.5), (basis[0] + basis[1]) / math.sqrt(2))]:
        # basis functions decay like 1/x, so the window costs O(1/L)
        res = mt_analyze(Signal(GRID, f), spec)
        want = np.zeros(6)
        want[:2] = target
        assert np.all(np.abs(res.values - want) <= res.tail_bound)
        assert np.max(np.abs(res.values - want)) < 1e-2


def test_synthesis_examples(rng):
    one = MTBasisSpec.of([1j])
    s = mt_synthesize([1.0], one, GRID)
    assert np.allclose(s.samples, mt_function(one, 0, GRID.points))
    spec = random_spec(rng)
    assert np.all(mt_synthesize(np.zeros(8), spec, GRID).samples == 0)
    # round trip: decays like 1/x, so compare within the reported tail bound
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    res = mt_analyze(mt_synthesize(c, spec, GRID), spec)
    assert np.all(np.abs(res.values - c) <= res.tail_bound)
    # a combination decaying like 1/x^2 (coefficients annihilate the 1/x term)
    lead = np.array([math.sqrt(a.imag / math.pi) for a in spec.zeros])
    c2 = c.copy()
    c2[-1] = -np.dot(c[:-1], lead[:-1]) / lead[-1]
    back = mt_analyze(mt_synthesize(c2, spec, GRID), spec).values
    # inner products of 1/x^2 against 1/x lose O(1/L^2)
    assert np.max(np.abs(back - c2)) < 1e-4


def test_gram_identity(rng):
    for _ in range(5):
        g = mt_gram(random_spec(rng), GRID)
        assert np.max(np.abs(g - np.eye(8))) < 1e-5


def test_ordering_covariance(rng):
    spec = random_spec(rng, 5)
    perm = MTBasisSpec.of([spec.zeros[k] for k in rng.permutation(5)])
    # projector kernels agree on a sample of points
    x = np.linspace(-6, 6, 41)
    A = mt_matrix(spec, x)
    B = mt_matrix(perm, x)
    assert np.max(np.abs(A.T @ A.conj() - B.T @ B.conj())) < 1e-6


def test_orthogonal_to_blaschke_multiples(rng):
    zeros = rng.uniform(-2, 2, 4) + 1j * rng.uniform(0.3, 2, 4)
    spec = MTBasisSpec.of(zeros)
    B = BlaschkeSpec("halfplane", tuple(zeros), normalized=False)

    def integrand(x):
        h = 1.0 / (x + 0.7j) ** 2
        return mt_matrix(spec, x) * np.conj(eval_blaschke(B, x) * h)

    vals, _ = line_integral(integrand, LineGrid(256.0, 2**15))
    assert np.max(np.abs(vals)) < 1e-6


def test_repeated_pole_form():
    x = GRID.points
    one = repeated_pole_form(1j, 1, 0.0)
    assert abs(one[0] - mt_function(MTBasisSpec.of([1j]), 0, 0.0)) < 1e-15
    three = repeated_pole_form(1j, 3, x)

    def integrand(t):
        b = repeated_pole_form(1j, 3, t)
        return b[:, None, :] * b.conj()[None, :, :]

    g, _ = line_integral(integrand, GRID)
    assert np.max(np.abs(g - np.eye(3))) < 1e-6
    # agrees with the MT functions of (a, a, a) up to unimodular constants
    spec = MTBasisSpec.of([1j] * 3)
    ratio = three / mt_matrix(spec, x)
    assert np.allclose(np.abs(ratio), 1) and np.allclose(ratio, ratio[:, :1])
    a = 2 + 0.5j
    vals = repeated_pole_form(a, 4, np.array([0.3, -1.7]))
    mod = np.abs(vals) * np.abs(np.array([0.3, -1.7]) - np.conj(a))
    assert np.allclose(mod, mod[0])
    with pytest.raises(DomainError):
        repeated_pole_form(1 - 1j, 2, 0.0)


def test_gram_tail_treatments(rng):
    spec = random_spec(rng, 4)
    errs = {}
    for L in (128.0, 256.0):
        grid = LineGrid(L, int(L) * 64)
        errs[L] = [np.max(np.abs(mt_gram(spec, grid, t) - np.eye(4))) for t in (False, "asymptotic", True)]
    # bare window: first order; leading-term tail: third order; mapped tails: rounding
    assert 1.8 < errs[128.0][0] / errs[256.0][0] < 2.2
    assert errs[128.0][1] / errs[256.0][1] > 6
    assert errs[256.0][2] < 1e-12
    with pytest.raises(DomainError):
        mt_gram(spec, GRID, "sometimes")
