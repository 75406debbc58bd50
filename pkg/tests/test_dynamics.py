import math

import numpy as np
import pytest

from holophase.blaschke import BlaschkeSpec, blaschke_phase
from holophase.dynamics import (
    FIG1_MAP,
    FIG2_MAP,
    FiniteBlaschke,
    RasterImage,
    eval_expanded,
    expand_iterate,
    fixed_point,
    iterate_eval,
    iterate_zeros,
    layer_eval,
    mt_from_iterates,
    neural_view,
    raster_zeros,
    render,
    two_layer_check,
    write_pgm,
    write_ppm,
)
from holophase.errors import DomainError, NoFixedPointError
from holophase.mt import mt_matrix
from holophase.blaschke import eval_blaschke
from holophase.numerics import LineGrid, cayley, line_integral

SQUARE = FiniteBlaschke((), nu=2)


def disk_sample(rng, k=100, r=0.95):
    return r * np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))


def test_construction():
    with pytest.raises(DomainError):
        FiniteBlaschke((1.0,))
    spec = BlaschkeSpec("disk", (0.5,), nu=1)
    F = FiniteBlaschke.from_spec(spec)
    z = np.array([0.1 + 0.2j, -0.7j])
    assert np.allclose(F(z), eval_blaschke(spec, z))


def test_iterate_examples(rng):
    assert iterate_eval(FIG1_MAP, 1, 0.0) == 0
    z = disk_sample(rng)
    assert np.array_equal(iterate_eval(FIG1_MAP, 0, z), z)
    assert abs(iterate_eval(SQUARE, 3, 0.9) - 0.9**8) < 1e-15
    assert np.all(np.abs(iterate_eval(FIG2_MAP, 4, z)) <= 1 + 1e-12)


def test_composition_vs_expansion(rng):
    z = disk_sample(rng)
    for F in (FIG1_MAP, FIG2_MAP, FiniteBlaschke((0.3 + 0.4j, -0.5), nu=0, theta=1.0)):
        for n in (1, 2, 3):
            num, den = expand_iterate(F, n)
            assert np.max(np.abs(eval_expanded(num, den, z) - iterate_eval(F, n, z))) < 1e-9


def test_fixed_points():
    fp = fixed_point(FIG1_MAP)
    assert abs(fp.alpha) < 1e-14 and abs(fp.multiplier - 0.5) < 1e-12
    fp = fixed_point(SQUARE)
    assert fp.alpha == 0 and fp.multiplier == 0
    assert abs(fixed_point(FIG2_MAP).alpha) < 1e-14
    F = FiniteBlaschke((0.3 + 0.4j, -0.5 + 0.1j), theta=0.7)
    fp = fixed_point(F)
    assert abs(F(fp.alpha) - fp.alpha) < 1e-12 and fp.multiplier < 1
    for n in range(1, 6):
        assert abs(iterate_eval(F, n, fp.alpha) - fp.alpha) < 1e-8
    # (z^2 + r)/(1 + r z^2): the remaining fixed points lie on the circle
    r = 0.9
    with pytest.raises(NoFixedPointError):
        fixed_point(FiniteBlaschke((1j * math.sqrt(r), -1j * math.sqrt(r)), theta=math.pi))


def test_contraction(rng):
    z = disk_sample(rng)
    d = [np.max(np.abs(iterate_eval(FIG1_MAP, n, z))) for n in range(1, 7)]
    assert all(a > b for a, b in zip(d, d[1:]))


def test_iterate_zero_examples():
    z = iterate_zeros(SQUARE, 2)
    assert z.count == 4 and np.all(z.zeros == 0)
    z1 = iterate_zeros(FIG1_MAP, 1)
    assert sorted(z1.zeros.real) == [0, 0.5] and z1.count == 2
    z2 = iterate_zeros(FIG1_MAP, 2)
    assert z2.count == 4
    extra = [w for w in z2.zeros if min(abs(w), abs(w - 0.5)) > 1e-9]
    assert len(extra) == 2
    assert np.max(np.abs(FIG1_MAP(np.array(extra)) - 0.5)) < 1e-10
    assert np.max(np.abs(iterate_eval(FIG1_MAP, 2, z2.zeros))) < 1e-10
    assert z2.divergence_partial > z1.divergence_partial


def test_degree_bookkeeping_and_divergence():
    for F in (FIG1_MAP, FIG2_MAP, FiniteBlaschke((0.3 + 0.4j, -0.5 + 0.1j), nu=1, theta=0.7)):
        parts = []
        for n in range(1, 5):
            z = iterate_zeros(F, n)
            assert z.count == F.degree**n
            assert np.all(np.abs(z.zeros) < 1)
            parts.append(z.divergence_partial)
        assert all(a < b for a, b in zip(parts, parts[1:]))
    with pytest.raises(DomainError):
        iterate_zeros(FIG1_MAP, 20)


def test_mt_from_iterates():
    spec = mt_from_iterates(SQUARE, 0)
    # F_0(z) = z has one zero, F_1 = z^2 has two: one new zero at 0
    assert len(spec.zeros) == 1 and abs(spec.zeros[0] - 1j) < 1e-15
    spec = mt_from_iterates(FIG1_MAP, 1)
    assert len(spec.zeros) == 2
    pre = np.asarray(cayley(np.array(spec.zeros), inverse=True))
    assert np.max(np.abs(FIG1_MAP(pre) - 0.5)) < 1e-10
    assert mt_from_iterates(FIG1_MAP, 1) == spec
    with pytest.raises(DomainError):
        mt_from_iterates(FiniteBlaschke((0.3, 0.2)), 1)


def test_mt_from_iterates_orthogonal_to_next_space():
    # the new basis functions are orthogonal to every multiple of F_2 (moved to the line)
    spec = mt_from_iterates(FIG1_MAP, 1, include_previous=True)
    zeros2 = np.asarray(cayley(iterate_zeros(FIG1_MAP, 2).zeros))
    B2 = BlaschkeSpec("halfplane", tuple(zeros2), normalized=False)

    def integrand(x):
        h = 1.0 / (x + 0.7j) ** 2
        return mt_matrix(spec, x) * np.conj(eval_blaschke(B2, x) * h)

    vals, _ = line_integral(integrand, LineGrid(256.0, 2**15))
    assert np.max(np.abs(vals)) < 1e-5


def test_neural_view():
    assert neural_view(BlaschkeSpec("halfplane", (1j,))) == [(1.0, 0.0)]
    (w, b), = neural_view(BlaschkeSpec("halfplane", (2 + 0.5j,)))
    assert (w, b) == (2.0, -4.0)
    zeros = (1j, 2 + 0.5j, -1 + 2j)
    spec = BlaschkeSpec("halfplane", zeros)
    x = np.linspace(-5, 5, 201)
    assert np.max(np.abs(layer_eval(neural_view(spec), x) - blaschke_phase(spec, x))) < 1e-12
    with pytest.raises(DomainError):
        neural_view(BlaschkeSpec("disk", (0.5,)))


def test_two_layer_sine_map():
    assert two_layer_check(np.linspace(-3, 3, 601)) < 1e-8


def test_render_identity_phase():
    F = FiniteBlaschke((), nu=1)
    tmpl = RasterImage(64, 16, (-math.pi, math.pi, 0.1, 2.0))
    img = render(F, 1, tmpl)
    x, _ = tmpl.coordinates()
    assert np.max(np.abs(img.values - x[None, :])) < 1e-12


def test_render_zeros_fig1():
    tmpl = RasterImage(400, 200, (-math.pi, math.pi, 0.05, 1.5))
    img = render(FIG1_MAP, 1, tmpl)
    found = raster_zeros(img)
    r, c = tmpl.pixel_of(0.5)
    assert np.min(np.hypot(found[:, 0] - r, found[:, 1] - c)) <= 1.5


def test_render_fig2_no_overflow(tmp_path):
    tmpl = RasterImage(1024, 512, (-math.pi, math.pi, 0.0, 3.0))
    img = render(FIG2_MAP, 4, tmpl)
    assert np.all(np.isfinite(img.values)) and img.metadata["sentinel_pixels"] == 0
    mod = render(FIG2_MAP, 4, tmpl, "neglog_modulus")
    assert np.all(np.isfinite(mod.values))
    write_ppm(img, tmp_path / "a.ppm")
    write_ppm(img, tmp_path / "b.ppm")
    assert (tmp_path / "a.ppm").read_bytes() == (tmp_path / "b.ppm").read_bytes()
    write_pgm(mod, tmp_path / "m.pgm")
    data = (tmp_path / "m.pgm").read_bytes()
    assert data.startswith(b"P5\n1024 512\n255\n") and len(data) == len(b"P5\n1024 512\n255\n") + 1024 * 512
