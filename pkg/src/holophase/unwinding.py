"""Blaschke factorization by FFT and the unwinding series.

The outer factor of a Hardy function is recovered from its modulus alone,
``G = exp(P(log|F|))`` where ``P`` doubles the positive Fourier modes of the
real function ``log|F|`` and drops the negative ones.  The Blaschke factor is
then ``B = F / G``; no root finding is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import zeta

from .errors import DegenerateInputError, DomainError, HolophaseError
from .numerics import CircleGrid, Signal, cayley, winding_number

__all__ = [
    "Factorization",
    "UnwindingLevel",
    "UnwindingResult",
    "weiss_factorize",
    "unwind",
    "circle_from_halfplane",
    "remarkable_blaschke",
    "remarkable_series",
    "remarkable_series_error",
    "blaschke_phase_tail",
]

DEFAULT_FLOOR = 1e-12
DEFAULT_DEPTH = 32
DEFAULT_TOL = 1e-10


class Factorization(NamedTuple):
    blaschke: Signal
    outer: Signal
    floored_samples: int


def _outer_from_modulus(logmod: np.ndarray) -> np.ndarray:
    c = np.fft.fft(logmod)
    n = len(c)
    c[1 : n // 2] *= 2.0
    c[n // 2 :] = 0.0
    return np.exp(np.fft.ifft(c))


def weiss_factorize(F: Signal, floor: float = DEFAULT_FLOOR) -> Factorization:
    """Split boundary samples of ``F`` into Blaschke and outer parts.

    Samples with ``|F| < floor * max|F|`` are raised to that level before
    taking logarithms; how many were touched is reported in the result.
    """
    if not isinstance(F.grid, CircleGrid):
        raise DomainError("weiss_factorize works on circle grids")
    f = F.samples
    mod = np.abs(f)
    peak = mod.max()
    if peak == 0:
        raise DegenerateInputError("cannot factor the zero function")
    low = floor * peak
    floored = int(np.count_nonzero(mod < low))
    G = _outer_from_modulus(np.log(np.maximum(mod, low)))
    B = f / G
    return Factorization(Signal(F.grid, B), Signal(F.grid, G), floored)


@dataclass(frozen=True, eq=False)
class UnwindingLevel:
    coefficient: complex
    blaschke: Signal
    energy: float
    floored_samples: int
    winding: int


@dataclass(frozen=True, eq=False)
class UnwindingResult:
    """Levels ``a_k, B_k`` of ``F = a_1 B_1 + a_2 B_1 B_2 + ...`` and what is left.

    ``cumulative_products[k]`` is ``B_1 ... B_{k+1}`` and ``residual`` is
    ``B_1 ... B_K (G_K - a_K)``, so ``F = sum_k a_k cumulative_products[k] + residual``.
    """

    levels: list
    cumulative_products: list
    residual: Signal
    total_energy: float
    stop_reason: str = field(default="depth")

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([lv.coefficient for lv in self.levels])

    @property
    def energies(self) -> list:
        return [lv.energy for lv in self.levels] + [self.residual.energy()]

    def partial_sum(self, k: int | None = None) -> Signal:
        k = len(self.levels) if k is None else k
        out = np.zeros(self.residual.grid.n, complex)
        for lv, prod in zip(self.levels[:k], self.cumulative_products[:k]):
            out = out + lv.coefficient * prod.samples
        return Signal(self.residual.grid, out)


class UnwindingError(HolophaseError):
    def __init__(self, level, cause):
        super().__init__(f"unwinding failed at level {level}: {cause}")
        self.level = level
        self.cause = cause


def unwind(F: Signal, depth: int = DEFAULT_DEPTH, tol: float = DEFAULT_TOL,
           floor: float = DEFAULT_FLOOR) -> UnwindingResult:
    """Iterated Blaschke factorization of ``F``.

    Level k factors ``G_{k-1} - a_{k-1}`` (with ``G_0 - a_0 := F``) as
    ``B_k G_k`` and takes ``a_k`` as the mean (mode 0) of ``G_k``, which is
    ``G_k(0)``.  Stops after ``depth`` levels or once the residual energy drops
    below ``tol * ||F||^2``.
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    grid = F.grid
    total = F.energy()
    current = F.samples
    cumulative = np.ones(grid.n, complex)
    levels, products = [], []
    reason = "depth"
    for k in range(1, depth + 1):
        try:
            B, G, floored = weiss_factorize(Signal(grid, current), floor)
        except HolophaseError as exc:
            raise UnwindingError(k, exc) from exc
        a = complex(np.mean(G.samples))
        cumulative = cumulative * B.samples
        levels.append(UnwindingLevel(a, B, abs(a) ** 2, floored, winding_number(current)))
        products.append(Signal(grid, cumulative.copy()))
        current = G.samples - a
        if np.mean(np.abs(current) ** 2) < tol * total:
            reason = "tolerance"
            break
    residual = Signal(grid, cumulative * current)
    return UnwindingResult(levels, products, residual, total, reason)


def circle_from_halfplane(f, grid: CircleGrid) -> Signal:
    """Transport a half-plane Hardy function to the disk, ``F(z) = f(w(z)) / (1 + z)``.

    ``w`` is the Cayley map; for ``f = 1/(x+i)`` the result is the constant
    ``1/(2i)``.  At ``z = -1`` (``w = infinity``) the value is the limit
    ``w f(w) / (2i)``, estimated at ``w = +-1e8``.
    """
    z = grid.points
    out = np.zeros(grid.n, complex)
    ok = np.abs(1.0 + z) > 1e-14
    out[ok] = f(cayley(z[ok])) / (1.0 + z[ok])
    if not np.all(ok):
        w = np.array([1e8, -1e8], dtype=complex)
        out[~ok] = np.mean(w * np.asarray(f(w)) / 2j)
    return Signal(grid, out)


# exp(2 i pi / x) and the Blaschke product with zeros 1/(j + i)

_Q = math.exp(-2 * math.pi)


def blaschke_phase_tail(w, J: int, order: int = 40):
    """Phase contributed by the factors with ``|j| > J`` of the product
    ``prod_j ((j-i)/(j+i)) ((w-j-i)/(w-j+i))``.

    Each factor is ``exp(i * t_j)`` with ``t_j = -i log(...)``; expanding
    ``log`` in powers of ``1/j`` and summing with Hurwitz zeta values gives
    the tail to machine precision once ``J`` exceeds ``|w| + 1`` comfortably.
    Valid for complex ``w``.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) + 1 >= 0.5 * J):
        raise DomainError("tail expansion needs J > 2(|w| + 1)")
    total = np.zeros(w.shape, complex)
    for p in range(2, order + 1, 2):
        # odd powers cancel between j and -j
        coef = ((-1) ** (p + 1) / p) * ((-1j) ** p - 1j**p + (1j - w) ** p - (-w - 1j) ** p)
        total = total + 2.0 * coef * zeta(p, J + 1)
    return -1j * total


def _g_product_phase_real(w: np.ndarray, J: int) -> np.ndarray:
    # phase sum over 1 <= |j| <= J of the paired factors, real w only.  Each
    # factor has phase 2*atan2(w, d_j); using 2*atan(w/d_j) instead changes
    # it by a multiple of 2 pi and keeps the running sum O(log |w|).
    j = np.arange(1, J + 1, dtype=float)
    out = np.zeros(w.shape)
    for sgn in (1.0, -1.0):
        jj = sgn * j
        d = jj * (jj - w[..., None]) + 1.0
        with np.errstate(divide="ignore"):
            terms = 2.0 * np.arctan(w[..., None] / d)
        out = out + terms.sum(axis=-1)
    return out


def g_truncated_product(w, J: int, tail: bool = True):
    """``prod_{|j| <= J} ((j-i)/(j+i)) ((w-j-i)/(w-j+i))``, optionally tail-corrected.

    For real ``w`` the product is accumulated as a sum of factor phases with
    a cancellation-free formula.  Without the tail correction the truncation
    error is about ``4|w|/J``.
    """
    w = np.asarray(w, dtype=complex)
    center = -(w - 1j) / (w + 1j)
    if np.all(w.imag == 0):
        out = center * np.exp(1j * _g_product_phase_real(w.real, J))
    else:
        j = np.arange(-J, J + 1)
        j = j[j != 0]
        fac = ((j - 1j) / (j + 1j)) * (w[..., None] - j - 1j) / (w[..., None] - j + 1j)
        out = center * np.prod(fac, axis=-1)
    if tail:
        out = out * np.exp(1j * blaschke_phase_tail(w, J))
    return out[()] if out.ndim == 0 else out


def remarkable_blaschke(x, J: int = 2000, tail: bool = True):
    """Blaschke product with zeros ``1/(j+i)``, ``|j| <= J``, on the real line.

    The zeros sit in the lower half-plane, so this is inner for the lower
    half-plane; bare factors ``(x - b)/(x - conj(b))`` are used.  Under
    ``w = 1/x`` the factors become those of :func:`g_truncated_product`.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise DomainError("x = 0 is the essential singularity")
    if J < 64:
        raise DomainError("use at least 64 zeros on each side")
    return g_truncated_product(1.0 / x, J, tail=tail)


def remarkable_series(x, N: int, J: int = 2000, tail: bool = True):
    """Partial sum ``e^{-2pi} + (1 - e^{-4pi}) sum_{n<N} (-1)^n e^{-2n pi} B^{n+1}``."""
    B = remarkable_blaschke(x, J, tail)
    out = np.full(np.shape(B), _Q, dtype=complex)
    power = np.array(B, dtype=complex)
    for n in range(N):
        out = out + (1 - _Q**2) * (-_Q) ** n * power
        power = power * B
    return out[()] if out.ndim == 0 else out


def exp_2ipi_over_x(x):
    """``exp(2 i pi / x)`` with the argument reduced exactly before scaling by 2 pi."""
    w = 1.0 / np.asarray(x, dtype=float)
    frac = w - np.round(w)
    return np.exp(2j * np.pi * frac)


def remarkable_series_error(x, N: int, J: int = 2000, tail: bool = True) -> float:
    """Max over ``x`` of ``|partial sum - exp(2 i pi / x)|``."""
    return float(np.max(np.abs(remarkable_series(x, N, J, tail) - exp_2ipi_over_x(x))))

