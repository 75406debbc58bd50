"""Grids, unitary DFT, Hardy projections, quadrature and special functions.

Two sampling domains are supported.  A :class:`CircleGrid` samples the unit
circle at angles ``2*pi*k/n``; a :class:`LineGrid` samples the periodized
window ``[-L, L)`` of the real line.  Everything else in the package is built
on the :class:`Signal` values defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, SingularityError, SizeError

__all__ = [
    "CircleGrid",
    "LineGrid",
    "Signal",
    "Spectrum",
    "dft",
    "idft",
    "hardy_project",
    "cayley",
    "complex_gamma",
    "complex_loggamma",
    "legendre",
    "bessel_j",
    "inner_product",
    "norm",
    "winding_number",
    "gauss_legendre",
    "panel_gauss_legendre",
    "half_line_nodes",
    "tail_nodes",
]


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CircleGrid:
    """``n`` equispaced samples of the unit circle, sample k at angle 2*pi*k/n."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_pow2(int(self.n)):
            raise SizeError(f"circle grid length must be a power of two, got {self.n}")
        if self.n < 8:
            raise SizeError(f"circle grid needs at least 8 samples, got {self.n}")

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @property
    def points(self) -> np.ndarray:
        """Sample positions as unit complex numbers."""
        return np.exp(1j * self.angles)

    @property
    def modes(self) -> np.ndarray:
        """Integer Fourier mode of each spectral slot (FFT ordering)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    @property
    def weight(self) -> float:
        # quadrature weight for d(theta)/2pi
        return 1.0 / self.n


@dataclass(frozen=True)
class LineGrid:
    """``n`` samples of ``[-L, L)``; sample k sits at ``-L + 2*L*k/n``."""

    half_width: float = 64.0
    n: int = 8192

    def __post_init__(self):
        if not self.half_width > 0:
            raise SizeError(f"half_width must be positive, got {self.half_width}")
        if not isinstance(self.n, (int, np.integer)) or not _is_pow2(int(self.n)):
            raise SizeError(f"line grid length must be a power of two, got {self.n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def points(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    @property
    def frequencies(self) -> np.ndarray:
        """Frequency of each spectral slot, resolution 1/(2L), FFT ordering."""
        return np.fft.fftfreq(self.n, d=self.spacing)

    @property
    def weight(self) -> float:
        return self.spacing


Grid = Union[CircleGrid, LineGrid]


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex samples of a function on a grid."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n,):
            raise SizeError(f"expected {self.grid.n} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise DomainError("signal contains non-finite samples")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "Signal":
        """Sample ``func`` at the grid points (unit complex numbers on the circle)."""
        return cls(grid, func(grid.points))

    def __add__(self, other):
        if isinstance(other, Signal):
            _check_same_grid(self, other)
            return Signal(self.grid, self.samples + other.samples)
        return Signal(self.grid, self.samples + other)

    def __sub__(self, other):
        if isinstance(other, Signal):
            _check_same_grid(self, other)
            return Signal(self.grid, self.samples - other.samples)
        return Signal(self.grid, self.samples - other)

    def __mul__(self, other):
        if isinstance(other, Signal):
            _check_same_grid(self, other)
            return Signal(self.grid, self.samples * other.samples)
        return Signal(self.grid, self.samples * other)

    __rmul__ = __mul__

    def conj(self) -> "Signal":
        return Signal(self.grid, self.samples.conj())

    def energy(self) -> float:
        return float(inner_product(self, self).real)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Unitary DFT coefficients of a :class:`Signal`, in FFT ordering."""

    grid: Grid
    coefficients: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        if isinstance(self.grid, CircleGrid):
            return self.grid.modes
        return self.grid.frequencies


def _check_same_grid(a: Signal, b: Signal) -> None:
    if a.grid != b.grid:
        raise SizeError(f"grid mismatch: {a.grid} vs {b.grid}")


def dft(s: Signal) -> Spectrum:
    """Forward unitary DFT."""
    return Spectrum(s.grid, np.fft.fft(s.samples, norm="ortho"))


def idft(spec: Spectrum) -> Signal:
    """Inverse of :func:`dft`."""
    return Signal(spec.grid, np.fft.ifft(spec.coefficients, norm="ortho"))


def _analytic_mask(grid: Grid) -> np.ndarray:
    if isinstance(grid, CircleGrid):
        freq = grid.modes
    else:
        freq = grid.frequencies
    # mode 0 kept in full; the Nyquist slot reads as negative and is dropped
    return freq >= 0


def hardy_project(s: Signal) -> Signal:
    """Zero all strictly negative frequencies of ``s``."""
    c = np.fft.fft(s.samples)
    c[~_analytic_mask(s.grid)] = 0.0
    return Signal(s.grid, np.fft.ifft(c))


def cayley(z, inverse: bool = False):
    """Cayley map ``w = i(1-z)/(1+z)`` from the disk to the upper half-plane.

    With ``inverse=True`` the map ``z = (i-w)/(i+w)`` is applied instead.
    """
    z = np.asarray(z, dtype=complex)
    if inverse:
        den = 1j + z
        if np.any(np.abs(den) == 0):
            raise SingularityError("inverse Cayley map has a pole at w = -i")
        out = (1j - z) / den
    else:
        den = 1.0 + z
        if np.any(np.abs(den) == 0):
            raise SingularityError("Cayley map has a pole at z = -1")
        out = 1j * (1.0 - z) / den
    return out[()] if out.ndim == 0 else out


# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 0.5
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def complex_loggamma(z):
    """A logarithm of Gamma(z) (branch unspecified; ``exp`` of it is Gamma).

    Lanczos approximation on ``Re z >= 1/2`` and the reflection formula
    elsewhere.  Raises :class:`SingularityError` on non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    near_int = np.abs(z - np.round(z.real)) < 1e-14 * np.maximum(1.0, np.abs(z))
    if np.any(near_int & (np.round(z.real) <= 0)):
        raise SingularityError("Gamma has poles at the non-positive integers")
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _loggamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        # reduce the sine argument to keep precision for large |Re z|
        shift = np.round(zl.real)
        s = np.sin(np.pi * (zl - shift)) * np.where(shift % 2 == 0, 1.0, -1.0)
        out[left] = math.log(math.pi) - np.log(s) - _loggamma_right(1.0 - zl)
    return out[0] if scalar else out


def complex_gamma(z):
    """Gamma function for complex arguments."""
    return np.exp(complex_loggamma(z))


def legendre(n: int, x):
    """Legendre polynomial P_n(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + 1e-9):
        raise DomainError("legendre expects |x| <= 1")
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev[()] if p_prev.ndim == 0 else p_prev
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p[()] if p.ndim == 0 else p


def bessel_j(k: int, x):
    """Bessel function J_k(x) from its integral representation.

    (1/pi) * int_0^pi cos(k*tau - x*sin(tau)) dtau, evaluated as a periodic
    trapezoid rule over the full period, which converges geometrically once
    the node count exceeds ``|k| + x``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j expects x >= 0")
    xmax = float(np.max(x)) if x.size else 0.0
    m = 2 * int(abs(k) + xmax) + 64
    tau = 2 * np.pi * np.arange(m) / m
    vals = np.cos(k * tau[:, None] - np.outer(np.sin(tau), x.ravel()))
    out = vals.mean(axis=0).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def inner_product(a: Signal, b: Signal) -> complex:
    """Trapezoid quadrature of a * conj(b) (d(theta)/2pi on the circle, dx on the line)."""
    _check_same_grid(a, b)
    return complex(np.sum(a.samples * b.samples.conj()) * a.grid.weight)


def norm(s: Signal) -> float:
    return math.sqrt(max(inner_product(s, s).real, 0.0))


def winding_number(samples) -> int:
    """Winding number about the origin of a closed, sampled curve."""
    s = np.asarray(samples, dtype=complex)
    ratios = np.roll(s, -1) / s
    return int(np.rint(np.sum(np.angle(ratios)) / (2 * np.pi)))


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panel_gauss_legendre(a: float, b: float, panels: int, order: int = 16):
    """Composite Gauss-Legendre rule with ``panels`` equal panels on ``[a, b]``."""
    edges = np.linspace(a, b, panels + 1)
    x0, w0 = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def half_line_nodes(n: int, scale: float = 1.0):
    """Nodes and weights for ``int_0^inf`` via Gauss-Legendre on a tanh-sinh map.

    The substitution ``x = scale * exp(pi/2 * sinh(s))`` sends ``s`` in
    ``[-S, S]`` onto ``(0, inf)`` with double-exponential decay of the
    Jacobian at both ends; ``S`` is chosen so the truncated mass is below
    1e-16 for integrands bounded by a power law.
    """
    s_max = 3.2
    s, w = gauss_legendre(n, -s_max, s_max)
    e = np.exp(0.5 * np.pi * np.sinh(s))
    x = scale * e
    jac = scale * e * 0.5 * np.pi * np.cosh(s)
    return x, w * jac


def tail_nodes(start: float, n: int = 64):
    """Nodes and weights for ``int_start^inf`` with ``x = start / u``, u in (0, 1].

    Exact for integrands decaying like ``x**-2`` times a smooth function of 1/x.
    """
    if start <= 0:
        raise DomainError("tail_nodes needs a positive start")
    u, w = gauss_legendre(n, 0.0, 1.0)
    return start / u, w * start / u**2


def line_integral(func, grid: LineGrid, tails: bool = True, order: int = 64):
    """Integral of ``func`` over the real line using ``grid`` plus mapped tails.

    The window ``[-L, L]`` is handled by the trapezoid rule on the grid
    samples (closed at ``+L``) with the first Euler-Maclaurin endpoint
    correction, the derivatives taken by central differences.  The two
    half-lines beyond it use :func:`tail_nodes`.  Returns ``(total, tail_part)``.
    """
    x = grid.points
    h = grid.spacing
    L = grid.half_width
    vals = func(x)
    window = np.sum(vals, axis=-1) * h
    ends = func(np.array([-L, L, -L - h, -L + h, L - h, L + h]))
    window = window + 0.5 * h * (ends[..., 1] - ends[..., 0])
    d_left = (ends[..., 3] - ends[..., 2]) / (2 * h)
    d_right = (ends[..., 5] - ends[..., 4]) / (2 * h)
    window = window - h * h / 12.0 * (d_right - d_left)
    if not tails:
        return window, 0.0 * window
    t, w = tail_nodes(L, order)
    tail = np.sum((func(t) + func(-t)) * w, axis=-1)
    return window + tail, tail
