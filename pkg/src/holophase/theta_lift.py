"""Harmonic functions in the upper half-space as superpositions of slices.

For ``f`` on the plane with transform ``fhat(xi) = int f(x) exp(-2 pi i x.xi) dx``
the slice functions

    F_theta(z) = int_0^inf exp(2 pi i r z) fhat(r theta) r dr,   Im z >= 0,

are holomorphic in ``z``, and ``u(x, y) = int_0^{2pi} F_theta(x.theta + i y) dtheta``
is the Poisson extension of ``f``.  Transforms along rays are exact
non-uniform DFTs of the pixel samples (finufft), radial integrals use a
uniform grid with an Euler-Maclaurin correction for the kink at ``r = 0``,
and angular integrals use the trapezoid rule.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import finufft
import numpy as np

from .errors import DomainError, NumericalInstabilityError, SizeError
from .numerics import LineGrid, Signal, bessel_j, gauss_legendre, half_line_nodes

__all__ = [
    "Image2D",
    "HalfSpacePoint",
    "SliceFamily",
    "SupportWarning",
    "fourier_transform",
    "slice_family",
    "radon",
    "slice",
    "cauchy_slice",
    "harmonic_extend",
    "poisson_extend",
    "zsph",
    "bessel_slice_example",
    "bessel_closed_form",
    "fourier_grid",
    "spectral_radius",
    "isometry_report",
    "cz_apply",
    "riesz",
    "dirichlet_basis",
    "dirichlet_closed_form",
    "dirichlet_generating",
    "dirichlet_gram",
    "RIESZ_CALIBRATION",
]

NUFFT_EPS = 1e-14
SUPPORT_TOL = 1e-10

# cz_apply with Omega(theta) = cos(theta) realizes the multiplier xi_1/|xi|,
# while the Riesz transform is -i xi_1/|xi|.  Measured on the unit Gaussian
# as mean(riesz_direct / cz_apply(cos)) over pixels where |cz| > 1e-3:
# -1.0000000j (imaginary part exact to 1e-9).  Frozen here.
RIESZ_CALIBRATION = -1j


class SupportWarning(UserWarning):
    """The image does not vanish at the edge of its window."""


def _nufft_opts() -> dict:
    threads = os.environ.get("HOLOPHASE_THREADS")
    return {"nthreads": int(threads)} if threads else {}


@dataclass(frozen=True, eq=False)
class Image2D:
    """Samples ``f(x1_j, x2_k)`` at ``x = -L + h j``, ``h = 2L/n``; axis 0 is ``x1``."""

    samples: np.ndarray
    half_width: float

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise SizeError("image must be square")
        n = s.shape[0]
        if n < 8 or n & (n - 1):
            raise SizeError("image side must be a power of two >= 8")
        if not np.all(np.isfinite(s)):
            raise DomainError("image samples must be finite")
        if self.half_width <= 0:
            raise DomainError("half width must be positive")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    @classmethod
    def from_function(cls, func: Callable, n: int = 512, half_width: float = 8.0) -> "Image2D":
        x = -half_width + (2.0 * half_width / n) * np.arange(n)
        X1, X2 = np.meshgrid(x, x, indexing="ij")
        return cls(np.asarray(func(X1, X2)), half_width)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.spacing**2)

    def edge_ratio(self) -> float:
        s = np.abs(self.samples)
        peak = s.max()
        if peak == 0:
            return 0.0
        edge = max(s[0].max(), s[-1].max(), s[:, 0].max(), s[:, -1].max())
        return float(edge / peak)

    @property
    def nyquist(self) -> float:
        return 0.5 / self.spacing


class HalfSpacePoint(NamedTuple):
    x1: float
    x2: float
    y: float


def _check_support(img: Image2D) -> None:
    if img.edge_ratio() > SUPPORT_TOL:
        warnings.warn(f"image edge reaches {img.edge_ratio():.2e} of its peak; "
                      "transforms include the window's truncation", SupportWarning, stacklevel=3)


def fourier_transform(img: Image2D, xi1, xi2) -> np.ndarray:
    """``fhat`` at arbitrary frequencies from the pixel sum ``h^2 sum f exp(-2 pi i x.xi)``."""
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    shape = np.broadcast(xi1, xi2).shape
    a = np.broadcast_to(xi1, shape).ravel()
    b = np.broadcast_to(xi2, shape).ravel()
    h = img.spacing
    if np.any(np.abs(a) > img.nyquist * (1 + 1e-12)) or np.any(np.abs(b) > img.nyquist * (1 + 1e-12)):
        raise DomainError("frequencies beyond the grid's Nyquist limit")
    if a.size == 0:
        return np.zeros(shape, complex)
    f = np.ascontiguousarray(img.samples, dtype=complex)
    # x_j = h (j - n/2), matching finufft's centred mode ordering
    out = finufft.nufft2d2(2 * np.pi * h * a, 2 * np.pi * h * b, f, isign=-1, eps=NUFFT_EPS, **_nufft_opts())
    return (h * h * out).reshape(shape)


def fourier_grid(img: Image2D, pad: int = 1):
    """``fhat`` on the Cartesian grid ``xi = m / (2 L pad)`` by a zero-padded FFT."""
    n, h = img.n, img.spacing
    N = pad * n
    buf = np.zeros((N, N), complex)
    buf[:n, :n] = img.samples
    F = np.fft.fftshift(np.fft.fft2(buf))
    xi = (np.arange(N) - N // 2) / (N * h)
    # shift the origin of x from the first sample to zero
    phase = np.exp(2j * np.pi * img.half_width * xi)
    return xi, h * h * F * phase[:, None] * phase[None, :]


def spectral_radius(img: Image2D, rel: float = 1e-15) -> float:
    """Smallest radius outside which ``|fhat|`` stays below ``rel * max|fhat|``."""
    xi, F = fourier_grid(img)
    a = np.abs(F)
    peak = a.max()
    if peak == 0:
        return 1.0
    X1, X2 = np.meshgrid(xi, xi, indexing="ij")
    big = a > rel * peak
    r = float(np.sqrt(X1[big] ** 2 + X2[big] ** 2).max()) + 2.0 * (xi[1] - xi[0])
    return min(r, img.nyquist)


@dataclass(frozen=True, eq=False)
class SliceFamily:
    """``fhat(r theta_m)`` on ``M`` equispaced angles and a uniform radial grid.

    ``radii[k] = k * dr`` for ``k = 0..K``.  All slice quantities derive
    from this table.
    """

    angles: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    source: Image2D

    @property
    def M(self) -> int:
        return len(self.angles)

    @property
    def dr(self) -> float:
        return float(self.radii[1] - self.radii[0])

    @property
    def fhat0(self) -> complex:
        return complex(np.mean(self.values[:, 0]))

    def _radial_weights(self) -> np.ndarray:
        w = np.full(len(self.radii), self.dr)
        w[0] = w[-1] = 0.5 * self.dr
        return w

    def spectrum(self, y: float = 0.0) -> np.ndarray:
        """``F_theta(. + iy)^(r) = fhat(r theta) r exp(-2 pi r y)`` on the radial grid."""
        return self.values * self.radii * np.exp(-2 * np.pi * self.radii * y)

    def _kink_correction(self) -> complex:
        # Euler-Maclaurin: int_0 g ~ trapezoid + dr^2/12 g'(0), g'(0) = fhat(0)
        return self.dr**2 / 12.0 * self.fhat0

    def boundary(self, grid: LineGrid, y: float = 0.0) -> np.ndarray:
        """``F_theta_m(t + iy)`` on the points of ``grid``, shape ``(M, grid.n)``."""
        if y < 0:
            raise DomainError("slices live on Im z >= 0")
        if np.max(self.radii) * grid.spacing > 1.5:
            raise DomainError("t-grid too coarse for the radial band")
        c = np.ascontiguousarray(self.spectrum(y) * self._radial_weights(), dtype=complex)
        x = 2 * np.pi * self.radii * grid.spacing
        out = finufft.nufft1d1(x, c, grid.n, isign=1, eps=NUFFT_EPS, **_nufft_opts())
        return out + self._kink_correction()

    def evaluate(self, m: int, z) -> np.ndarray:
        """``F_theta_m(z)`` at arbitrary points with ``Im z >= 0`` (direct sum)."""
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag < 0):
            raise DomainError("slices live on Im z >= 0")
        g = self.values[m] * self.radii * self._radial_weights()
        ph = np.exp(2j * np.pi * np.multiply.outer(z, self.radii))
        return ph @ g + self._kink_correction()

    def extend(self, x1, x2, y: float, omega=None) -> np.ndarray:
        """``sum_m (2 pi/M) Omega_m F_theta_m(x.theta_m + iy)`` at points sharing ``y``."""
        if y < 0:
            raise DomainError("harmonic extension needs y >= 0")
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        shape = np.broadcast(x1, x2).shape
        a = np.broadcast_to(x1, shape).ravel()
        b = np.broadcast_to(x2, shape).ravel()
        om = np.ones(self.M) if omega is None else np.asarray(omega, dtype=complex)
        c = (2 * np.pi / self.M) * om[:, None] * self.spectrum(y) * self._radial_weights()
        xi1 = np.multiply.outer(np.cos(self.angles), self.radii).ravel()
        xi2 = np.multiply.outer(np.sin(self.angles), self.radii).ravel()
        c = np.ascontiguousarray(c.ravel(), dtype=complex)
        out = finufft.nufft2d3(2 * np.pi * xi1, 2 * np.pi * xi2, c, a, b, isign=1,
                               eps=NUFFT_EPS, **_nufft_opts())
        out = out + (2 * np.pi / self.M) * np.sum(om) * self._kink_correction()
        return out.reshape(shape)

    def extend_grid(self, y: float = 0.0, omega=None, half_width: float | None = None,
                    n: int | None = None) -> Image2D:
        """The extension (or its boundary limit at ``y = 0``) on a square pixel grid."""
        L = self.source.half_width if half_width is None else half_width
        n = self.source.n if n is None else n
        h = 2.0 * L / n
        om = np.ones(self.M) if omega is None else np.asarray(omega, dtype=complex)
        c = (2 * np.pi / self.M) * om[:, None] * self.spectrum(y) * self._radial_weights()
        xi1 = np.multiply.outer(np.cos(self.angles), self.radii).ravel()
        xi2 = np.multiply.outer(np.sin(self.angles), self.radii).ravel()
        if max(np.abs(xi1).max(), np.abs(xi2).max()) * h > 1.5:
            raise DomainError("output grid too coarse for the spectral band")
        c = np.ascontiguousarray(c.ravel(), dtype=complex)
        out = finufft.nufft2d1(2 * np.pi * h * xi1, 2 * np.pi * h * xi2, c, (n, n), isign=1,
                               eps=NUFFT_EPS, **_nufft_opts())
        out = out + (2 * np.pi / self.M) * np.sum(om) * self._kink_correction()
        return Image2D(out, L)


def slice_family(img: Image2D, M: int = 256, dr: float = 1.0 / 256, r_max: float | None = None) -> SliceFamily:
    """Tabulate ``fhat`` along ``M`` rays (M even) on a uniform radial grid."""
    if M < 2 or M % 2:
        raise DomainError("M must be a positive even number")
    _check_support(img)
    R = spectral_radius(img) if r_max is None else min(float(r_max), img.nyquist)
    K = int(math.ceil(R / dr))
    radii = dr * np.arange(K + 1)
    radii = radii[radii <= img.nyquist]
    angles = 2 * np.pi * np.arange(M) / M
    xi1 = np.multiply.outer(np.cos(angles), radii)
    xi2 = np.multiply.outer(np.sin(angles), radii)
    vals = fourier_transform(img, xi1, xi2)
    return SliceFamily(angles, radii, vals, img)


def radon(f: Image2D, theta: float, t_grid: LineGrid, du: float = 1.0 / 128) -> Signal:
    """``R_theta f(t)`` as the inverse 1-D transform of ``fhat(u theta)``, u real."""
    _check_support(f)
    R = spectral_radius(f)
    K = int(math.ceil(R / du))
    u = du * np.arange(-K, K + 1)
    u = u[np.abs(u) <= f.nyquist]
    vals = fourier_transform(f, u * math.cos(theta), u * math.sin(theta))
    if np.max(np.abs(u)) * t_grid.spacing > 1.5:
        raise DomainError("t-grid too coarse for the spectral band")
    out = finufft.nufft1d1(2 * np.pi * u * t_grid.spacing, np.ascontiguousarray(vals * du),
                           t_grid.n, isign=1, eps=NUFFT_EPS, **_nufft_opts())
    return Signal(t_grid, out)


def slice(f: Image2D, theta: float, y: float = 0.0, t_grid: LineGrid | None = None,
          dr: float = 1.0 / 256) -> Signal:
    """``F_theta(t + iy)`` sampled on ``t_grid`` (default ``[-64, 64)``, 4096 points)."""
    t_grid = LineGrid(64.0, 4096) if t_grid is None else t_grid
    R = spectral_radius(f)
    K = int(math.ceil(R / dr))
    radii = dr * np.arange(K + 1)
    radii = radii[radii <= f.nyquist]
    vals = fourier_transform(f, radii * math.cos(theta), radii * math.sin(theta))
    fam = SliceFamily(np.array([theta]), radii, vals[None, :], f)
    return Signal(t_grid, fam.boundary(t_grid, y)[0])


def cauchy_slice(profile: Signal, z, n_dim: int = 2):
    """``((n-1)! / (2 pi i)^n) int R(t) / (t - z)^n dt`` by the trapezoid rule."""
    if n_dim < 2:
        raise DomainError("n_dim must be at least 2")
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise DomainError("the Cauchy representation needs Im z > 0")
    t = profile.grid.points
    h = profile.grid.spacing
    const = math.factorial(n_dim - 1) / (2j * np.pi) ** n_dim
    ker = 1.0 / (t[None, :] - z.ravel()[:, None]) ** n_dim
    out = const * h * (ker @ profile.samples)
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def harmonic_extend(slices: SliceFamily, p) -> complex:
    """``u(x, y) = int F_theta(x.theta + iy) dtheta`` at one point with ``y > 0``."""
    x1, x2, y = p
    if not y > 0:
        raise DomainError("harmonic extension needs y > 0")
    return complex(slices.extend(np.array([x1]), np.array([x2]), float(y))[0])


def poisson_extend(img: Image2D, x1, x2, y: float, pad: int = 4):
    """Poisson extension by the ``exp(-2 pi |xi| y)`` multiplier on a padded FFT grid."""
    if not y > 0:
        raise DomainError("Poisson extension needs y > 0")
    xi, F = fourier_grid(img, pad)
    d = xi[1] - xi[0]
    X1, X2 = np.meshgrid(xi, xi, indexing="ij")
    G = F * np.exp(-2 * np.pi * np.hypot(X1, X2) * y) * d * d
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    E1 = np.exp(2j * np.pi * np.multiply.outer(x1, xi))
    E2 = np.exp(2j * np.pi * np.multiply.outer(x2, xi))
    return np.einsum("pi,ij,pj->p", E1, G, E2)


def zsph(k: int, l: int, p, M: int | None = None):
    """``(1/2pi) int exp(-i l theta) Z_theta^k dtheta`` with ``Z_theta = x.theta + iy``.

    Returns ``(value, degenerate)``; ``degenerate`` is True when ``|l| > k``,
    where the integral vanishes identically.
    """
    if k < 0:
        raise DomainError("degree must be nonnegative")
    x1, x2, y = (np.asarray(c, dtype=float) for c in p)
    if abs(l) > k:
        return np.zeros(np.broadcast(x1, x2, y).shape, complex)[()], True
    M = 2 * k + 2 if M is None else M
    if M < 2 * k + 2:
        raise DomainError("need at least 2k + 2 angles for exactness")
    th = 2 * np.pi * np.arange(M) / M
    Z = (np.multiply.outer(x1, np.cos(th)) + np.multiply.outer(x2, np.sin(th))
         + 1j * np.multiply.outer(y, np.ones(M)))
    val = np.mean(np.exp(-1j * l * th) * Z**k, axis=-1)
    return val[()] if np.ndim(val) == 0 else val, False


def bessel_slice_example(k: int, r: float, p, M: int = 512):
    """Average of ``(-i)^k e^{ik theta} exp(2 pi i r Z_theta)`` over ``M`` angles.

    Equals ``J_k(2 pi r |x|) e^{ik phi} exp(-2 pi r y)`` with ``phi`` the azimuth of ``x``.
    """
    if r <= 0:
        raise DomainError("r must be positive")
    x1, x2, y = (float(c) for c in p)
    if y < 0:
        raise DomainError("y must be nonnegative")
    th = 2 * np.pi * np.arange(M) / M
    Z = x1 * np.cos(th) + x2 * np.sin(th) + 1j * y
    return complex(np.mean((-1j) ** k * np.exp(1j * k * th) * np.exp(2j * np.pi * r * Z)))


def bessel_closed_form(k: int, r: float, p) -> complex:
    x1, x2, y = (float(c) for c in p)
    s = math.hypot(x1, x2)
    phi = math.atan2(x2, x1)
    return complex(bessel_j(k, 2 * np.pi * r * s) * np.exp(1j * k * phi) * math.exp(-2 * np.pi * r * y))


class IsometryLine(NamedTuple):
    lhs: float
    rhs: float
    gap: float


def _gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def isometry_report(f: Image2D, M: int = 256, t_grid: LineGrid | None = None,
                    y_nodes: int = 96, pad: int = 4) -> dict:
    """Left and right sides of the Bergman, Hardy and Dirichlet identities.

    * Bergman: ``4 pi int ||F_theta||_B^2 dtheta`` (the y-integral done in
      closed form, ``int e^{-4 pi r y} dy = 1/(4 pi r)``) against the pixel
      energy ``||f||^2``.
    * Hardy: ``int ||F_theta||_{H^2}^2 dtheta`` from t-grid samples of each
      slice against ``int |fhat|^2 |xi| dxi`` on a padded Cartesian FFT grid.
    * Dirichlet: the same slice side against ``(1/pi) int int |du/dy|^2``,
      integrating Plancherel in ``x`` and an exp-sinh rule in ``y``.
    """
    t_grid = LineGrid(64.0, 4096) if t_grid is None else t_grid
    if np.all(f.samples == 0):
        z = IsometryLine(0.0, 0.0, 0.0)
        return {"bergman": z, "hardy": z, "dirichlet": z}
    fam = slice_family(f, M)
    w = fam._radial_weights()
    dth = 2 * np.pi / fam.M
    # Bergman, angular and radial parts, with the kink term at r = 0
    radial = np.sum(np.abs(fam.values) ** 2 * fam.radii * w, axis=1) + fam.dr**2 / 12 * np.abs(fam.values[:, 0]) ** 2
    bergman_lhs = float(dth * np.sum(radial))
    bergman_rhs = f.energy()
    # Hardy
    samples = fam.boundary(t_grid)
    T = t_grid.half_width
    tail = 2.0 * (np.abs(fam.values[:, 0]) / (4 * np.pi**2)) ** 2 / (3 * T**3)
    hardy_per = np.sum(np.abs(samples) ** 2, axis=1) * t_grid.spacing + tail
    slice_side = float(dth * np.sum(hardy_per))
    xi, F = fourier_grid(f, pad)
    d = xi[1] - xi[0]
    X1, X2 = np.meshgrid(xi, xi, indexing="ij")
    rho = np.hypot(X1, X2)
    P = np.abs(F) ** 2 * d * d
    hardy_rhs = float(np.sum(P * rho))
    # Dirichlet: g(y) = int |du/dy(., y)|^2 dx by Plancherel
    yy, wy = half_line_nodes(y_nodes, scale=1.0 / (4 * np.pi * max(float(np.sum(P * rho) / max(np.sum(P), 1e-300)), 1e-3)))
    flat_r = rho.ravel()
    flat_P = (P * rho**2).ravel()
    keep = flat_P > 0
    flat_r, flat_P = flat_r[keep], flat_P[keep]
    g = np.array([4 * np.pi**2 * np.sum(flat_P * np.exp(-4 * np.pi * flat_r * y)) for y in yy])
    dirichlet_rhs = float(np.sum(g * wy) / np.pi)
    return {
        "bergman": IsometryLine(bergman_lhs, bergman_rhs, _gap(bergman_lhs, bergman_rhs)),
        "hardy": IsometryLine(slice_side, hardy_rhs, _gap(slice_side, hardy_rhs)),
        "dirichlet": IsometryLine(slice_side, dirichlet_rhs, _gap(slice_side, dirichlet_rhs)),
    }


def cz_apply(f: Image2D, omega, M: int | None = None, half_width: float | None = None,
             n: int | None = None, family: SliceFamily | None = None) -> Image2D:
    """Average ``Omega(theta) F_theta`` over directions and take the boundary limit.

    ``omega`` is either a callable of the angle or an array of ``M`` samples
    at ``theta_m = 2 pi m / M``.  The result realizes the multiplier
    ``Omega(xi/|xi|)``; output grid defaults to the input grid.
    """
    if callable(omega):
        M = 256 if M is None else M
        om = np.asarray(omega(2 * np.pi * np.arange(M) / M), dtype=complex) * np.ones(M)
    else:
        om = np.asarray(omega, dtype=complex).ravel()
        M = len(om)
    fam = family if family is not None and family.M == M else slice_family(f, M)
    return fam.extend_grid(0.0, om, half_width, n)


def riesz(f: Image2D, j: int, M: int = 256, **kw) -> Image2D:
    """Riesz transform ``R_j``, multiplier ``-i xi_j/|xi|``, by the rotation method."""
    if j not in (1, 2):
        raise DomainError("j must be 1 or 2")
    om = np.cos if j == 1 else np.sin
    out = cz_apply(f, om, M=M, **kw)
    return Image2D(RIESZ_CALIBRATION * out.samples, out.half_width)


# Dirichlet space orthonormal system


def _hardy_basis(n: int, z):
    # (i/sqrt(pi)) ((z-i)/(z+i))^n / (z+i), orthonormal in H^2 of the half-plane
    return 1j / math.sqrt(math.pi) * ((z - 1j) / (z + 1j)) ** n / (z + 1j)


def _hardy_basis_derivative(n: int, z):
    return (1j / math.sqrt(math.pi)) * (z - 1j) ** (n - 1) * (-z + (2 * n + 1) * 1j) / (z + 1j) ** (n + 2) \
        if n > 0 else -(1j / math.sqrt(math.pi)) / (z + 1j) ** 2


def _angular_count(s, y) -> int:
    # the integrand in theta is analytic in a strip of half-width asinh((1+y)/s)
    need = 40.0 * np.max(np.asarray(s) / (1.0 + np.asarray(y)), initial=0.0)
    m = 64
    while m < need:
        m *= 2
    return m


def _radial_profiles(N: int, K: int, s, y, derivative: bool = False, M: int | None = None) -> np.ndarray:
    """``h_{n,k}(s, y)`` (or its y-derivative) for ``n <= N``, ``|k| <= K``.

    ``u_{n,k}(x, y) = e^{ik phi} h_{n,k}(|x|, y)`` with
    ``h = (1/sqrt(2 pi)) int F_n(s cos t + iy) e^{ikt} dt``; the angular
    integrals for all ``k`` come from one FFT.  Shape ``(N+1, 2K+1) + s.shape``.
    """
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    M = _angular_count(s, y) if M is None else M
    t = 2 * np.pi * np.arange(M) / M
    z = np.multiply.outer(s, np.cos(t)) + 1j * np.multiply.outer(y, np.ones(M))
    ks = np.arange(-K, K + 1)
    out = np.empty((N + 1, 2 * K + 1) + s.shape, complex)
    for n in range(N + 1):
        vals = 1j * _hardy_basis_derivative(n, z) if derivative else _hardy_basis(n, z)
        # (1/M) sum v e^{ikt} = ifft coefficient at k
        c = np.fft.ifft(vals, axis=-1)
        out[n] = np.moveaxis(c[..., ks % M], -1, 0) * math.sqrt(2 * np.pi)
    return out


def dirichlet_basis(n: int, k: int, p, M: int | None = None):
    """Orthonormal system of the Dirichlet space of the upper half-space.

    ``u_{n,k}(x, y) = (1/sqrt(2 pi)) int_0^{2 pi} F_n(x.theta + iy) e^{ik theta} dtheta``
    with ``F_n`` the Fourier-type basis of ``H^2``.  The inner product is
    ``(1/pi) int int du/dy conj(dv/dy)``.  For ``k = 0`` this equals
    ``sqrt(pi)`` times :func:`dirichlet_closed_form`.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    x1, x2, y = (np.asarray(c, dtype=float) for c in p)
    if np.any(y < 0):
        raise DomainError("points must lie in the closed upper half-space")
    s = np.hypot(x1, x2)
    phi = np.arctan2(x2, x1)
    K = abs(k)
    h = _radial_profiles(n, K, s, y, M=M)[n, k + K]
    out = np.exp(1j * k * phi) * h
    return out[()] if np.ndim(out) == 0 else out


def _dirichlet_ab(p):
    x1, x2, y = (np.asarray(c, dtype=float) for c in p)
    R = x1**2 + x2**2 + y**2
    den = R + 2 * y + 1
    return (R - 2 * y + 1) / den, (R - 1) / den, den


def dirichlet_closed_form(n: int, p):
    """``sqrt(2/pi) a^n P_n(b) / sqrt(rho^2 + 2y + 1)``, ``rho^2 = |x|^2 + y^2``.

    ``a^n P_n(b)`` is expanded in ``a^2`` and ``ab`` so the point ``(0, 0, 1)``
    where ``a = 0`` needs no special case.
    """
    a2, ab, den = _dirichlet_ab(p)
    if np.any(a2 < -1e-12):
        raise DomainError("negative argument under the square root")
    total = np.zeros(np.shape(a2))
    for m in range(n // 2 + 1):
        c = (-1) ** m * math.factorial(2 * n - 2 * m) / (
            2**n * math.factorial(m) * math.factorial(n - m) * math.factorial(n - 2 * m))
        total = total + c * ab ** (n - 2 * m) * a2**m
    out = math.sqrt(2 / math.pi) * total / np.sqrt(den)
    return out[()] if np.ndim(out) == 0 else out


def dirichlet_generating(t, p, terms: int | None = None):
    """Generating function ``sum_n t^n`` of :func:`dirichlet_closed_form`.

    With ``terms=None`` the closed form
    ``sqrt(2/pi) / sqrt((rho^2 - 2y + 1) t^2 - 2 (rho^2 - 1) t + rho^2 + 2y + 1)``;
    otherwise the truncated series.
    """
    if terms is None:
        a2, ab, den = _dirichlet_ab(p)
        q = den * (a2 * t * t - 2 * ab * t + 1)
        return math.sqrt(2 / math.pi) / np.sqrt(q)
    return sum(t**n * dirichlet_closed_form(n, p) for n in range(terms + 1))


class DirichletGram(NamedTuple):
    labels: list
    gram: np.ndarray
    refinement: list


def _gram_at(N: int, K: int, order: int) -> np.ndarray:
    # polar coordinates in the (s, y) quarter plane; R = c u/(1-u) maps (0,1)
    u, wu = gauss_legendre(2 * order, 0.0, 1.0)
    c = 1.5
    R = c * u / (1 - u)
    wR = wu * c / (1 - u) ** 2
    psi, wpsi = gauss_legendre(order, 0.0, 0.5 * np.pi)
    RR, PP = np.meshgrid(R, psi, indexing="ij")
    W = np.multiply.outer(wR, wpsi) * RR
    s = RR * np.cos(PP)
    y = RR * np.sin(PP)
    nk = (N + 1) * (2 * K + 1)
    gram = np.zeros((nk, nk), complex)
    for i in range(len(R)):
        d = _radial_profiles(N, K, s[i], y[i], derivative=True)
        d = d.reshape(nk, len(psi))
        # (1/pi) * 2 pi * int int dh conj(dh') s ds dy
        gram += 2.0 * (d * (W[i] * s[i])) @ d.conj().T
    # azimuthal orthogonality is exact
    kk = np.tile(np.arange(-K, K + 1), N + 1)
    gram[kk[:, None] != kk[None, :]] = 0.0
    return gram


def dirichlet_gram(N: int = 4, K: int = 2, order: int = 24, levels: int = 3, tol: float = 2e-2) -> DirichletGram:
    """Gram matrix of ``u_{n,k}``, ``n <= N``, ``|k| <= K``, with a refinement study.

    Quadrature is Gauss-Legendre in polar coordinates of the ``(|x|, y)``
    quarter plane with an algebraic map to infinity, using the exact
    angular reduction ``<u, v> = delta_kk' 2 int int dh/dy conj(dh'/dy) s ds dy``.
    ``refinement`` lists ``max|G - I|`` for ``order / 2^j``, ``j = levels-1..0``.
    Raises if the two finest levels disagree by more than ``10 * tol``.
    """
    labels = [(n, k) for n in range(N + 1) for k in range(-K, K + 1)]
    grams = []
    for j in reversed(range(levels)):
        grams.append(_gram_at(N, K, max(2, order >> j)))
    eye = np.eye(len(labels))
    errs = [float(np.max(np.abs(g - eye))) for g in grams]
    if len(grams) > 1 and np.max(np.abs(grams[-1] - grams[-2])) > 10 * tol:
        raise NumericalInstabilityError("Dirichlet Gram quadrature has not converged",
                                        offending=errs)
    return DirichletGram(labels, grams[-1], errs)

