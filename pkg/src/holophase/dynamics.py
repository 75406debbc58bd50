"""Iterates of finite Blaschke products on the disk.

A map ``F(z) = e^{i theta} z^nu prod_j (z - a_j)/(1 - conj(a_j) z)`` of degree
at least two with an interior fixed point ``alpha`` pulls every compact set
of the disk towards ``alpha``.  Its iterates ``F_n`` have ``d^n`` zeros and
define the nested spaces ``F_n H^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Literal, NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .blaschke import BlaschkeSpec, eval_blaschke
from .errors import DomainError, NoFixedPointError, NumericalInstabilityError, SingularityError
from .mt import MTBasisSpec
from .numerics import cayley

__all__ = [
    "FiniteBlaschke",
    "IterateZeros",
    "RasterImage",
    "iterate_eval",
    "fixed_point",
    "iterate_zeros",
    "expand_iterate",
    "mt_from_iterates",
    "neural_view",
    "sine_map",
    "sine_layer",
    "render",
    "raster_zeros",
    "write_pgm",
    "write_ppm",
    "FIG1_MAP",
    "FIG2_MAP",
]

MAX_TOTAL_ZEROS = 20_000
ROOT_RESIDUAL_TOL = 1e-6
DISK_TOL = 1e-8


@dataclass(frozen=True)
class FiniteBlaschke:
    """``e^{i theta} z^nu prod_j (z - a_j)/(1 - conj(a_j) z)`` with bare factors."""

    zeros: tuple = ()
    nu: int = 0
    theta: float = 0.0

    def __post_init__(self):
        z = tuple(complex(a) for a in self.zeros)
        if any(not abs(a) < 1 for a in z):
            raise DomainError("zeros must lie inside the unit disk")
        if self.nu < 0:
            raise DomainError("nu must be nonnegative")
        object.__setattr__(self, "zeros", z)

    @property
    def degree(self) -> int:
        return self.nu + len(self.zeros)

    @property
    def spec(self) -> BlaschkeSpec:
        return BlaschkeSpec("disk", self.zeros, nu=self.nu,
                            prefactor=complex(np.exp(1j * self.theta)), normalized=False)

    @classmethod
    def from_spec(cls, spec: BlaschkeSpec) -> "FiniteBlaschke":
        if spec.domain != "disk":
            raise DomainError("iteration needs a disk Blaschke product")
        if spec.normalized and any(a != 0 for a, _ in spec.zeros):
            # fold the convergence constants into the rotation
            c = np.exp(-1j * sum(m * np.angle(a) for a, m in spec.zeros if a != 0))
        else:
            c = 1.0
        theta = float(np.angle(complex(spec.prefactor) * c))
        return cls(tuple(complex(a) for a in spec.expanded_zeros), spec.nu, theta)

    def __call__(self, z):
        return eval_blaschke(self.spec, z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        a = np.asarray(self.zeros, dtype=complex)
        c = np.exp(1j * self.theta)
        fac = [(z - aj) / (1 - np.conj(aj) * z) for aj in a]
        dfac = [(1 - abs(aj) ** 2) / (1 - np.conj(aj) * z) ** 2 for aj in a]
        prod_all = np.prod(fac, axis=0) if len(a) else np.ones_like(z)
        zn = z**self.nu
        out = (self.nu * z ** (self.nu - 1) if self.nu else 0.0) * prod_all
        for k in range(len(a)):
            others = np.prod([fac[i] for i in range(len(a)) if i != k], axis=0) if len(a) > 1 else 1.0
            out = out + zn * dfac[k] * others
        out = c * out
        return out[()] if np.ndim(out) == 0 else out

    def numerator(self) -> np.ndarray:
        # coefficients, lowest degree first
        num = np.zeros(self.nu + 1, complex)
        num[-1] = np.exp(1j * self.theta)
        for a in self.zeros:
            num = P.polymul(num, [-a, 1.0])
        return num

    def denominator(self) -> np.ndarray:
        den = np.array([1.0 + 0j])
        for a in self.zeros:
            den = P.polymul(den, [1.0, -np.conj(a)])
        return den


# the maps shown in the phase portraits
FIG1_MAP = FiniteBlaschke((0.5,), nu=1)
FIG2_MAP = FiniteBlaschke((0.25,), nu=2)


def iterate_eval(F: FiniteBlaschke, n: int, z):
    """``F_n(z)``, the n-fold composition, by chained evaluation."""
    if n < 0:
        raise DomainError("iteration count must be nonnegative")
    out = np.asarray(z, dtype=complex)
    for _ in range(n):
        out = np.asarray(F(out))
    return out[()] if out.ndim == 0 else out


def expand_iterate(F: FiniteBlaschke, n: int):
    """Numerator and denominator coefficients of ``F_n`` (lowest degree first).

    ``F(N/D) = e^{i theta} N^nu prod(N - a D) / (D^nu prod(D - conj(a) N))``.
    Coefficients lose accuracy quickly as the degree grows; the expansion is
    kept for cross-checks on small ``n``.
    """
    num, den = np.array([0.0, 1.0 + 0j]), np.array([1.0 + 0j])
    for _ in range(n):
        new_num = np.array([complex(np.exp(1j * F.theta))])
        new_den = np.array([1.0 + 0j])
        for _ in range(F.nu):
            new_num = P.polymul(new_num, num)
            new_den = P.polymul(new_den, den)
        for a in F.zeros:
            new_num = P.polymul(new_num, P.polysub(num, a * den))
            new_den = P.polymul(new_den, P.polysub(den, np.conj(a) * num))
        num, den = new_num, new_den
    return num, den


def eval_expanded(num: np.ndarray, den: np.ndarray, z):
    return P.polyval(np.asarray(z, dtype=complex), num) / P.polyval(np.asarray(z, dtype=complex), den)


class FixedPoint(NamedTuple):
    alpha: complex
    multiplier: float
    iterations: int


def fixed_point(F: FiniteBlaschke, tol: float = 1e-12, max_iter: int = 10_000) -> FixedPoint:
    """Attracting interior fixed point, by iterating from 0 and a Newton polish."""
    if F.degree < 2:
        raise DomainError("dynamics needs degree at least 2")
    z = 0j
    for k in range(1, max_iter + 1):
        nz = complex(F(z))
        if abs(nz) > 1 - 1e-12:
            raise NoFixedPointError("orbit of 0 reached the boundary circle")
        if abs(nz - z) < 0.1 * tol:
            z = nz
            break
        z = nz
    else:
        raise NoFixedPointError(f"orbit of 0 did not settle in {max_iter} steps")
    for _ in range(3):
        d = complex(F.derivative(z)) - 1.0
        if d == 0:
            break
        z = z - (complex(F(z)) - z) / d
    mult = abs(complex(F.derivative(z)))
    if not (abs(complex(F(z)) - z) < tol and mult < 1 and abs(z) < 1):
        raise NoFixedPointError("no attracting interior fixed point")
    return FixedPoint(z, mult, k)


@dataclass(frozen=True, eq=False)
class IterateZeros:
    """Zeros of ``F_n`` with multiplicity and the level where each first appears."""

    level: int
    zeros: np.ndarray
    found_at: np.ndarray

    @property
    def count(self) -> int:
        return len(self.zeros)

    @property
    def divergence_partial(self) -> float:
        return float(np.sum(1.0 - np.abs(self.zeros)))


def _preimages(F: FiniteBlaschke, w: complex) -> np.ndarray:
    """The ``d`` solutions of ``F(z) = w`` for ``|w| < 1``."""
    if w == 0:
        return np.array([0j] * F.nu + list(F.zeros), dtype=complex)
    poly = P.polysub(F.numerator(), w * F.denominator())
    roots = np.roots(poly[::-1])
    # two Newton steps on the rational equation
    for _ in range(2):
        d = np.asarray(F.derivative(roots))
        ok = np.abs(d) > 1e-300
        roots[ok] = roots[ok] - (np.asarray(F(roots))[ok] - w) / d[ok]
    return roots


def iterate_zeros(F: FiniteBlaschke, n: int, cap: int = MAX_TOTAL_ZEROS) -> IterateZeros:
    """Zeros of ``F_n``, counted with multiplicity.

    ``zeros(F_n) = nu x zeros(F_{n-1})`` together with the preimages of each
    ``a_j`` under ``F_{n-1}``.  A preimage under ``F_{n-1}`` is built as a
    chain of degree-``d`` solves (companion-matrix roots plus Newton steps),
    never by expanding ``F_{n-1}``.  Every zero is checked against
    ``|F_n(z)| < 1e-6`` and ``|z| < 1``.
    """
    if n < 0:
        raise DomainError("level must be nonnegative")
    d = F.degree
    if d < 1:
        raise DomainError("constant map has no zeros")
    if d**n > cap:
        raise DomainError(f"F_{n} has {d**n} zeros, above the cap {cap}")
    zeros = [0j]
    found = [0]
    # preimage sets of the a_j under F_{m-1}, refined level by level
    targets = [np.array([a]) for a in F.zeros]
    for m in range(1, n + 1):
        new_zeros = [z for z in zeros for _ in range(F.nu)]
        new_found = [f for f in found for _ in range(F.nu)]
        if m == 1:
            pre = [t for t in targets]
        else:
            pre = [np.concatenate([_preimages(F, complex(w)) for w in t]) for t in targets]
        targets = pre
        for t in pre:
            new_zeros.extend(t.tolist())
            new_found.extend([m] * len(t))
        zeros, found = new_zeros, new_found
    zeros = np.array(zeros, dtype=complex)
    found = np.array(found, dtype=int)
    if n > 0:
        resid = np.abs(np.asarray(iterate_eval(F, n, zeros)))
        bad = (resid >= ROOT_RESIDUAL_TOL) | (np.abs(zeros) >= 1 + DISK_TOL)
        if np.any(bad):
            raise NumericalInstabilityError("zero verification failed", offending=zeros[bad])
    return IterateZeros(n, zeros, found)


def _first_levels(F: FiniteBlaschke, zeros: np.ndarray, n: int) -> np.ndarray:
    out = np.full(len(zeros), n)
    vals = zeros.copy()
    for m in range(1, n + 1):
        vals = np.asarray(F(vals))
        hit = (np.abs(vals) < ROOT_RESIDUAL_TOL) & (out == n)
        out[hit] = np.minimum(out[hit], m)
    return out


def _order(zeros: np.ndarray, levels: np.ndarray) -> np.ndarray:
    # (level found, modulus, argument) with rounding so near-ties sort stably
    key_mod = np.round(np.abs(zeros), 12)
    key_arg = np.round(np.angle(zeros), 12)
    return np.lexsort((key_arg, key_mod, levels))


def mt_from_iterates(F: FiniteBlaschke, n: int, include_previous: bool = False) -> MTBasisSpec:
    """MT zeros for ``F_n H^2`` minus ``F_{n+1} H^2``, moved to the half-plane.

    The new zeros are those of ``F_{n+1}`` with the zeros of ``F_n`` removed
    (multiset difference, which needs ``F(0) = 0``).  They are sorted by
    (level found, modulus, argument).  With ``include_previous`` the zeros of
    ``F_n`` come first, so basis functions from index ``deg F_n`` on span the
    difference space.
    """
    if F.nu < 1:
        raise DomainError("nested iterate spaces need F(0) = 0 (nu >= 1)")
    old = iterate_zeros(F, n) if n > 0 else IterateZeros(0, np.array([0j]), np.array([0]))
    full = iterate_zeros(F, n + 1)
    new = _multiset_difference(full.zeros, old.zeros)
    new_levels = _first_levels(F, new, n + 1) if n + 1 > 0 else np.zeros(len(new), int)
    new = new[_order(new, new_levels)]
    if include_previous:
        prev = old.zeros[_order(old.zeros, old.found_at)]
        new = np.concatenate([prev, new])
    return MTBasisSpec.of(np.asarray(cayley(new)).ravel().tolist())


def _multiset_difference(big: np.ndarray, small: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    keep = np.ones(len(big), bool)
    for s in small:
        cand = np.flatnonzero(keep & (np.abs(big - s) < tol))
        if len(cand) == 0:
            raise NumericalInstabilityError("zeros of F_n are not zeros of F_{n+1}", offending=s)
        keep[cand[np.argmin(np.abs(big[cand] - s))]] = False
    return big[keep]


def neural_view(spec: BlaschkeSpec) -> list:
    """``(weight, bias)`` per zero, ``unit(x) = sigma(weight * x + bias)``.

    For ``a = alpha + i beta`` this is ``(1/beta, -alpha/beta)``; the units
    add up to :func:`blaschke_phase`.
    """
    if spec.domain != "halfplane":
        raise DomainError("the neural view is defined for half-plane products")
    return [(1.0 / a.imag, -a.real / a.imag) for a in spec.expanded_zeros]


def layer_eval(units: Sequence, x):
    """Sum of sigmoid units ``arctan(w x + b) + pi/2``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for w, b in units:
        out = out + np.arctan(w * x + b) + 0.5 * np.pi
    return out[()] if out.ndim == 0 else out


def sine_map(z):
    """``G(w)`` with ``w = i(1-z)/(1+z)``: the wavelet product pulled to the disk."""
    w = np.asarray(cayley(z))
    r = w - np.round(w.real)
    out = np.sin(np.pi * (1j - r)) / np.sin(np.pi * (1j + r))
    return out[()] if np.ndim(out) == 0 else out


def sine_layer(t):
    """Phase of the sine map on the circle, ``t -> arg F(e^{it})`` in ``(-pi, pi]``.

    With ``w = tan(t/2)`` real, ``G(w) = -conj(s)/s`` for ``s = sin(pi(w+i))``
    so the phase is ``pi - 2 arg s``.
    """
    t = np.asarray(t, dtype=float)
    w = np.tan(0.5 * t)
    w = w - np.round(w)
    s = np.sin(np.pi * (w + 1j))
    out = _wrap(np.pi - 2.0 * np.angle(s))
    return out[()] if out.ndim == 0 else out


def _wrap(phase):
    # into (-pi, pi]
    out = np.mod(phase + np.pi, 2 * np.pi) - np.pi
    return np.where(out == -np.pi, np.pi, out)


@dataclass(eq=False)
class RasterImage:
    """Pixels over the chart ``z = exp(-y + i x)``.

    Column ``c`` sits at ``x = x0 + (c + 1/2)(x1 - x0)/width`` and row ``r`` at
    ``y = y0 + (r + 1/2)(y1 - y0)/height``; row 0 is nearest the circle.
    """

    width: int
    height: int
    window: tuple = (-math.pi, math.pi, 0.0, 3.0)
    values: np.ndarray | None = None
    field: str = "phase"
    metadata: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError("raster needs positive dimensions")
        x0, x1, y0, y1 = self.window
        if not (x1 > x0 and y1 > y0):
            raise DomainError("window ranges must be increasing")

    def coordinates(self):
        x0, x1, y0, y1 = self.window
        x = x0 + (np.arange(self.width) + 0.5) * (x1 - x0) / self.width
        y = y0 + (np.arange(self.height) + 0.5) * (y1 - y0) / self.height
        return x, y

    def pixel_of(self, z) -> tuple:
        """Fractional (row, col) of a disk point in this chart."""
        z = np.asarray(z, dtype=complex)
        x0, x1, y0, y1 = self.window
        x = np.angle(z)
        y = -np.log(np.abs(z))
        col = (x - x0) / (x1 - x0) * self.width - 0.5
        row = (y - y0) / (y1 - y0) * self.height - 0.5
        return row, col


def render(F: FiniteBlaschke, n: int, template: RasterImage,
           field: Literal["phase", "neglog_modulus"] = "phase", clip: float = 10.0) -> RasterImage:
    """Phase (wrapped to ``(-pi, pi]``) or ``-log|F_n|`` over the chart."""
    x, y = template.coordinates()
    X, Y = np.meshgrid(x, y)
    z = np.exp(-Y + 1j * X)
    with np.errstate(all="ignore"):
        try:
            v = np.asarray(iterate_eval(F, n, z))
        except SingularityError:
            v = np.full(z.shape, np.nan + 0j)
        bad = ~np.isfinite(v)
        if field == "phase":
            vals = _wrap(np.angle(v))
            vals[bad] = 0.0
        elif field == "neglog_modulus":
            vals = -np.log(np.abs(v))
            vals = np.clip(vals, -clip, clip)
            vals[bad] = -clip
        else:
            raise DomainError(f"unknown field {field!r}")
    meta = {"map_degree": F.degree, "iterates": n, "sentinel_pixels": int(bad.sum()), "clip": clip}
    return RasterImage(template.width, template.height, tuple(template.window), vals, field, meta)


def raster_zeros(img: RasterImage) -> np.ndarray:
    """Pixel-corner plaquettes around which the phase winds, as (row, col) centres."""
    if img.field != "phase" or img.values is None:
        raise DomainError("zero detection needs a phase raster")
    p = img.values

    def dw(a, b):
        return _wrap(b - a)

    total = (dw(p[:-1, :-1], p[:-1, 1:]) + dw(p[:-1, 1:], p[1:, 1:])
             + dw(p[1:, 1:], p[1:, :-1]) + dw(p[1:, :-1], p[:-1, :-1]))
    wind = np.rint(total / (2 * np.pi)).astype(int)
    r, c = np.nonzero(wind)
    return np.column_stack([r + 0.5, c + 0.5])


def _to_bytes(img: RasterImage) -> np.ndarray:
    v = img.values
    if img.field == "phase":
        scaled = (v + np.pi) / (2 * np.pi)
    else:
        clip = img.metadata.get("clip", 10.0)
        scaled = (v + clip) / (2 * clip)
    return np.clip(np.floor(scaled * 255.0 + 0.5), 0, 255).astype(np.uint8)


def write_pgm(img: RasterImage, path) -> None:
    """Binary greyscale PGM (P5), row-major, 8 bits."""
    data = _to_bytes(img)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def write_ppm(img: RasterImage, path) -> None:
    """Binary colour PPM (P6).  Phase uses a hue wheel, modulus greyscale."""
    g = _to_bytes(img)
    if img.field == "phase":
        h = (img.values + np.pi) / (2 * np.pi) * 6.0
        k = np.floor(h).astype(int) % 6
        f = h - np.floor(h)
        up = np.floor(f * 255 + 0.5).astype(np.uint8)
        down = (255 - up).astype(np.uint8)
        full = np.full_like(up, 255)
        zero = np.zeros_like(up)
        table = [(full, up, zero), (down, full, zero), (zero, full, up),
                 (zero, down, full), (up, zero, full), (full, zero, down)]
        rgb = np.zeros(g.shape + (3,), np.uint8)
        for s, (r, gg, b) in enumerate(table):
            m = k == s
            rgb[m, 0], rgb[m, 1], rgb[m, 2] = r[m], gg[m], b[m]
    else:
        rgb = np.repeat(g[..., None], 3, axis=-1)
    with open(path, "wb") as fh:
        fh.write(f"P6\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb).tobytes())


def two_layer_check(t) -> float:
    """Max gap between ``arg F(F(e^{it}))`` and ``layer(layer(t))`` for the sine map."""
    t = np.asarray(t, dtype=float)
    chained = np.angle(sine_map(sine_map(np.exp(1j * t))))
    layered = sine_layer(sine_layer(t))
    return float(np.max(np.abs(_wrap(chained - layered))))

