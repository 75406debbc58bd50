"""Invariant suites behind ``holophase verify``.

Each suite takes a seeded generator and returns a list of :class:`Check`
records; a suite passes when every check does.  Sizes are chosen so each
suite runs in seconds.
"""

from __future__ import annotations

import warnings
from typing import Callable, NamedTuple

import numpy as np

from . import blaschke, dynamics, mt, multiscale, numerics, theta_lift, unwinding
from .numerics import CircleGrid, LineGrid, Signal

__all__ = ["Check", "SUITES", "run_suite", "random_disk_polynomial"]


class Check(NamedTuple):
    name: str
    value: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}


def _below(name: str, value: float, tol: float) -> Check:
    value = float(value)
    return Check(name, value, tol, bool(value < tol))


def random_disk_polynomial(rng: np.random.Generator, max_degree: int = 16, radius: float = 0.9):
    """Zeros uniform in ``|z| <= radius`` and a random complex leading coefficient."""
    d = int(rng.integers(1, max_degree + 1))
    a = radius * np.sqrt(rng.random(d)) * np.exp(2j * np.pi * rng.random(d))
    lead = complex(rng.normal(), rng.normal())
    return a, lead


def _numerics(rng) -> list:
    z = 0.95 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    w = numerics.cayley(z)
    back = numerics.cayley(w, inverse=True)
    g = CircleGrid(1024)
    s = Signal(g, rng.normal(size=1024) + 1j * rng.normal(size=1024))
    spec = numerics.dft(s)
    parseval = abs(float(np.sum(np.abs(spec.coefficients) ** 2)) / 1024 - s.energy()) / s.energy()
    p = numerics.hardy_project(s)
    zz = rng.normal(size=20) * 3 + 1j * (rng.normal(size=20) * 3)
    refl = numerics.complex_gamma(zz) * numerics.complex_gamma(1 - zz) * np.sin(np.pi * zz) / np.pi
    return [
        _below("cayley round trip", np.max(np.abs(back - z)), 1e-12),
        Check("cayley maps disk to upper half-plane", 0.0, 0.0, bool(np.all(w.imag > 0))),
        _below("parseval", parseval, 1e-12),
        _below("hardy projection idempotent", np.max(np.abs(numerics.hardy_project(p).samples - p.samples)), 1e-13),
        _below("gamma reflection", np.max(np.abs(refl - 1)), 1e-10),
    ]


def _blaschke(rng) -> list:
    a, _ = random_disk_polynomial(rng)
    spec = blaschke.BlaschkeSpec("disk", tuple(a), nu=1, prefactor=complex(np.exp(1j * rng.random())))
    g = CircleGrid(1024)
    b = blaschke.boundary_values(spec, g)
    zs = np.asarray(blaschke.eval_blaschke(spec, a))
    h = blaschke.BlaschkeSpec("halfplane", tuple(rng.normal(size=4) + 1j * (0.2 + rng.random(4))))
    x = np.linspace(-20, 20, 801)
    return [
        _below("disk |B| = 1 on the circle", np.max(np.abs(np.abs(b) - 1)), 1e-12),
        _below("disk B vanishes at its zeros", np.max(np.abs(zs)), 1e-12),
        _below("half-plane |B| = 1 on the line", np.max(np.abs(np.abs(blaschke.eval_blaschke(h, x)) - 1)), 1e-12),
    ]


def _mt(rng) -> list:
    zeros = rng.uniform(-3, 3, 8) + 1j * rng.uniform(0.2, 3, 8)
    spec = mt.MTBasisSpec.of(zeros)
    gram = mt.mt_gram(spec, LineGrid(256.0, 2**15))
    grid = LineGrid(256.0, 2**15)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    f = mt.mt_synthesize(c, spec, grid)
    back = mt.mt_analyze(f, spec)
    excess = np.max(np.abs(back.values - c) - back.tail_bound)
    return [
        _below("MT Gram identity", np.max(np.abs(gram - np.eye(8))), 1e-5),
        Check("MT analysis error within its tail bound", float(excess), 0.0, bool(excess <= 0)),
    ]


def _unwinding(rng) -> list:
    g = CircleGrid(4096)
    z = g.points
    worst = np.zeros(4)
    for _ in range(10):
        a, lead = random_disk_polynomial(rng)
        F = lead * np.prod(z[:, None] - a, axis=1)
        B, G, _ = unwinding.weiss_factorize(Signal(g, F))
        Bc = (lead / abs(lead)) * np.prod((z[:, None] - a) / (1 - a.conj() * z[:, None]), axis=1)
        res = unwinding.unwind(Signal(g, F), 32)
        e = float(np.sum(np.abs(res.coefficients) ** 2)) + res.residual.energy()
        worst = np.maximum(worst, [
            np.max(np.abs(np.abs(B.samples) - 1)),
            np.max(np.abs(B.samples * G.samples - F)) / np.max(np.abs(F)),
            np.max(np.abs(B.samples - Bc)),
            abs(e - np.mean(np.abs(F) ** 2)) / np.mean(np.abs(F) ** 2),
        ])
    x = np.linspace(0.1, 10, 200)
    return [
        _below("|B| = 1", worst[0], 1e-8),
        _below("BG = F", worst[1], 1e-8),
        _below("B matches closed form", worst[2], 1e-6),
        _below("unwinding energy balance", worst[3], 1e-6),
        _below("remarkable series N=6", unwinding.remarkable_series_error(x, 6), 1e-6),
    ]


def _multiscale(rng) -> list:
    x = np.linspace(-10, 10, 1001)
    c = multiscale.G_eval(x)
    idx = [(0, j) for j in range(-2, 3)] + [(1, 0)]
    W = multiscale.wavelet_gram(idx, half_width=256.0, n=2**16)
    return [
        _below("G closed vs Gamma form", np.max(np.abs(multiscale.G_eval(x, "gamma_form") - c)), 1e-10),
        _below("G closed vs truncated product", np.max(np.abs(multiscale.G_eval(x, "truncated_product", J=500) - c)), 1e-6),
        _below("|G| = 1 on the line", np.max(np.abs(np.abs(c) - 1)), 1e-12),
        _below("wavelet Gram identity", np.max(np.abs(W.gram - np.eye(len(idx)))), 1e-3),
    ]


def _dynamics(rng) -> list:
    F = dynamics.FIG1_MAP
    counts = [dynamics.iterate_zeros(F, n).count for n in range(1, 5)]
    fp = dynamics.fixed_point(F)
    z = 0.95 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    N, D = dynamics.expand_iterate(F, 3)
    return [
        Check("zero counts d^n", 0.0, 0.0, counts == [2, 4, 8, 16]),
        _below("fixed point", abs(complex(F(fp.alpha)) - fp.alpha), 1e-8),
        _below("chained vs expanded evaluation", np.max(np.abs(dynamics.eval_expanded(N, D, z) - dynamics.iterate_eval(F, 3, z))), 1e-9),
        _below("two-layer sine check", dynamics.two_layer_check(np.linspace(-3, 3, 601)), 1e-8),
    ]


def _theta_lift(rng) -> list:
    c = rng.uniform(-1, 1, 2)
    img = theta_lift.Image2D.from_function(
        lambda a, b: np.exp(-np.pi * ((a - c[0]) ** 2 + (b - c[1]) ** 2)), 256, 8.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", theta_lift.SupportWarning)
        rep = theta_lift.isometry_report(img, M=256)
        u = theta_lift.cz_apply(img, lambda t: np.ones_like(t), M=256)
    p = tuple(rng.uniform(-1, 1, 2)) + (float(rng.uniform(0.1, 1)),)
    bes = abs(theta_lift.bessel_slice_example(2, 1.0, p) - theta_lift.bessel_closed_form(2, 1.0, p))
    gen = abs(theta_lift.dirichlet_generating(0.3, p) - theta_lift.dirichlet_generating(0.3, p, 40))
    return [
        _below("Bergman gap", rep["bergman"].gap, 1e-3),
        _below("Hardy gap", rep["hardy"].gap, 1e-3),
        _below("Dirichlet gap", rep["dirichlet"].gap, 1e-3),
        _below("cz identity", np.max(np.abs(u.samples - img.samples)), 1e-6),
        _below("Bessel slice example", bes, 1e-8),
        _below("Dirichlet generating function", gen, 1e-10),
    ]


SUITES: dict[str, Callable] = {
    "numerics": _numerics,
    "blaschke": _blaschke,
    "mt": _mt,
    "unwinding": _unwinding,
    "multiscale": _multiscale,
    "dynamics": _dynamics,
    "theta_lift": _theta_lift,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one suite (or ``"all"``) and return a JSON-ready report."""
    names = list(SUITES) if name == "all" else [name]
    out = {"seed": seed, "suites": {}}
    ok = True
    for nm in names:
        rng = np.random.Generator(np.random.PCG64(seed))
        checks = SUITES[nm](rng)
        passed = all(ch.passed for ch in checks)
        ok &= passed
        out["suites"][nm] = {"passed": passed, "checks": [ch.as_dict() for ch in checks]}
    out["passed"] = ok
    return out

