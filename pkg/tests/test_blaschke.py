import math

import numpy as np
import pytest

from holophase.blaschke import (
    BlaschkeSpec,
    blaschke_condition,
    blaschke_phase,
    boundary_values,
    eval_blaschke,
    invariant_projection,
    phase_constant,
)
from holophase.errors import DomainError, SingularityError
from holophase.numerics import CircleGrid, LineGrid, Signal, hardy_project


def test_spec_validation():
    with pytest.raises(DomainError):
        BlaschkeSpec("disk", (1.2,))
    with pytest.raises(DomainError):
        BlaschkeSpec("halfplane", (1 - 1j,))
    with pytest.raises(DomainError):
        BlaschkeSpec("disk", ((0.3, 0),))
    s = BlaschkeSpec("disk", ((0.3, 2), 0.1j))
    assert s.degree == 3


def test_eval_examples():
    assert np.isclose(eval_blaschke(BlaschkeSpec("halfplane", (1j,)), 0.0), -1)
    assert np.isclose(eval_blaschke(BlaschkeSpec("disk", nu=1), 0.5), 0.5)
    a = 1 + 1j
    v = eval_blaschke(BlaschkeSpec("halfplane", (a,)), 0.0)
    expect = (math.sqrt(5) / (1 + 2j)) * (-1 - 1j) / (-1 + 1j)
    assert abs(v - expect) < 1e-15
    assert abs(abs(v) - 1) < 1e-15


def test_pole_raises():
    with pytest.raises(SingularityError):
        eval_blaschke(BlaschkeSpec("disk", (0.5,)), 2.0)
    with pytest.raises(SingularityError):
        eval_blaschke(BlaschkeSpec("halfplane", (1j,)), -1j)


def test_unimodular_and_interior(rng):
    g = CircleGrid(256)
    for _ in range(20):
        k = int(rng.integers(1, 33))
        a = 0.95 * np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))
        spec = BlaschkeSpec("disk", tuple(a), nu=int(rng.integers(0, 3)),
                            prefactor=complex(np.exp(2j * np.pi * rng.random())))
        assert np.max(np.abs(np.abs(boundary_values(spec, g)) - 1)) < 1e-10
        z = 0.99 * np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
        assert np.all(np.abs(eval_blaschke(spec, z)) < 1)


def test_log_space_matches_direct(rng):
    a = 0.9 * np.sqrt(rng.random(80)) * np.exp(2j * np.pi * rng.random(80))
    z = 0.8 * np.exp(2j * np.pi * rng.random(30))
    big = eval_blaschke(BlaschkeSpec("disk", tuple(a)), z)
    first = eval_blaschke(BlaschkeSpec("disk", tuple(a[:40])), z)
    second = eval_blaschke(BlaschkeSpec("disk", tuple(a[40:])), z)
    assert np.max(np.abs(big - first * second)) < 1e-12


def test_condition_examples():
    assert blaschke_condition([1j]).sum == 0.5
    sums = [blaschke_condition([j + 1j for j in range(-N, N + 1)]).sum for N in range(1, 30)]
    assert np.all(np.diff(sums) > 0)
    # sum over all integers of 1/(2 + j^2) = pi coth(pi sqrt 2)/sqrt 2
    limit = math.pi / math.tanh(math.pi * math.sqrt(2)) / math.sqrt(2)
    assert abs(blaschke_condition([j + 1j for j in range(-4000, 4001)]).sum - limit) < 1e-3
    rep = blaschke_condition([1j * 2.0**-k for k in range(30)])
    assert rep.sum < 2 and rep.verdict == "convergent"
    assert blaschke_condition([1j] * 100, threshold=3).verdict == "divergent-trend"
    with pytest.raises(DomainError):
        blaschke_condition([1.0 + 0j])


def test_phase_examples():
    s = BlaschkeSpec("halfplane", (1j,))
    assert abs(blaschke_phase(s, 0.0) - math.pi / 2) < 1e-15
    x = np.linspace(-50, 50, 1001)
    ph = blaschke_phase(s, x)
    assert np.all(np.diff(ph) > 0) and abs(blaschke_phase(s, 1e12) - math.pi) < 1e-10
    two = BlaschkeSpec("halfplane", (1j, 1 + 1j))
    assert abs(blaschke_phase(two, 1.0) - (3 * math.pi / 4 + math.pi / 2)) < 1e-15


def test_phase_matches_product(rng):
    a = rng.normal(size=6) * 3 + 1j * rng.uniform(0.2, 2, 6)
    spec = BlaschkeSpec("halfplane", tuple(a), prefactor=complex(np.exp(0.7j)))
    x = LineGrid(64.0, 4096).points
    lhs = phase_constant(spec) * np.exp(2j * blaschke_phase(spec, x))
    assert np.max(np.abs(lhs - eval_blaschke(spec, x))) < 1e-8


def test_invariant_projection_examples(rng):
    g = CircleGrid(128)
    z = g.points
    B = BlaschkeSpec("disk", nu=1)
    assert np.max(np.abs(invariant_projection(B, Signal(g, np.ones(128))).samples)) < 1e-14
    e2 = Signal(g, z**2)
    assert np.allclose(invariant_projection(B, e2).samples, z**2)
    spec = BlaschkeSpec("disk", (0.3 + 0.2j, -0.5j), nu=1)
    f = hardy_project(Signal(g, rng.normal(size=128) + 1j * rng.normal(size=128)))
    p1 = invariant_projection(spec, f)
    p2 = invariant_projection(spec, p1)
    assert np.max(np.abs(p2.samples - p1.samples)) < 1e-10
    assert p1.energy() <= f.energy() + 1e-12
