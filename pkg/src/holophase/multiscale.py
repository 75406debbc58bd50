"""An explicit holomorphic wavelet basis of the upper half-plane Hardy space.

``G`` is the Blaschke product with zeros ``j + i`` (all integers ``j``),
normalized so that ``G(0) = 1``.  The generator ``phi`` and the dyadic
products ``B_n(x) = prod_{j<n} G(2^j x)`` give the orthonormal family

    phi_{n,j}(x) = 2^{n/2} phi(2^n x - j) B(2^n x).

Wavelets at one scale span ``B_n H^2`` minus ``B_{n+1} H^2``.
"""

from __future__ import annotations

import math
from typing import Literal, NamedTuple

import numpy as np

from .errors import DomainError, SingularityError
from .numerics import complex_loggamma, tail_nodes
from .unwinding import g_truncated_product

__all__ = [
    "WaveletIndex",
    "G_eval",
    "G_n",
    "phi_eval",
    "script_B",
    "wavelet_eval",
    "wavelet_gram",
    "WaveletGram",
    "TAIL_CONSTANT",
]

# sup over 0 < |y| <= 1 of |1 - G(y)| / |y|.  It is attained as y -> 0,
# where it equals |G'(0)| = 2 pi coth(pi) = 6.30670. Measured with
#   y = linspace(-1, 1, 200001); max(|1 - G(y)| / |y|)
TAIL_CONSTANT = 6.31

# odd Taylor coefficients of log G at 0
_C1 = 2j * math.pi / math.tanh(math.pi)
_C3 = -(2j / 3) * math.pi**3 / (math.tanh(math.pi) * math.sinh(math.pi) ** 2)

_SQRT_PI = math.sqrt(math.pi)


class WaveletIndex(NamedTuple):
    n: int
    j: int


def _at_poles(x: np.ndarray) -> np.ndarray:
    return (x.imag == -1) & (x.real == np.round(x.real))


def _closed_form(x: np.ndarray) -> np.ndarray:
    # G is 1-periodic, so reduce the real part first
    r = x - np.round(x.real)
    num = np.sin(np.pi * (1j - r))
    den = np.sin(np.pi * (1j + r))
    if np.any(den == 0):
        raise SingularityError("G has poles at j - i")
    return num / den


def G_n(n: int, x):
    """``prod_{j<=n} ((j-i)/(j+i)) ((x-j-i)/(x-j+i))`` through Gamma ratios."""
    x = np.asarray(x, dtype=complex)
    if np.any(_at_poles(x) & (x.real <= n)):
        raise SingularityError("G_n has poles at j - i, j <= n")
    out = np.exp(
        complex_loggamma(-1j - n) - complex_loggamma(1j - n)
        + complex_loggamma(x - n + 1j) - complex_loggamma(x - n - 1j)
    )
    return out[()] if out.ndim == 0 else out


def _truncated(x: np.ndarray, J: int) -> np.ndarray:
    j = np.arange(-J, J + 1)
    out = np.ones(x.shape, complex)
    for jj in j:
        out = out * ((jj - 1j) / (jj + 1j)) * (x - jj - 1j) / (x - jj + 1j)
    return out


def G_eval(x, mode: Literal["closed_form", "gamma_form", "truncated_product"] = "closed_form",
           n: int = 0, J: int = 500, tail: bool = True):
    """Evaluate ``G``.

    ``closed_form`` uses ``sin(pi(i - x)) / sin(pi(i + x))``.  ``gamma_form``
    splits the product at ``n`` as ``G_n(x) / G_{-n-1}(-x)``.
    ``truncated_product`` multiplies the factors with ``|j| <= J`` and, with
    ``tail``, adds the phase of the rest from its Hurwitz zeta expansion.
    The bare truncation errs by about ``4|x| / J`` on real ``x``.
    """
    x = np.asarray(x, dtype=complex)
    if mode == "closed_form":
        out = _closed_form(x)
    elif mode == "gamma_form":
        out = np.asarray(G_n(n, x)) / np.asarray(G_n(-n - 1, -x))
    elif mode == "truncated_product":
        if J < 1:
            raise DomainError("J must be positive")
        if np.any(_at_poles(x) & (np.abs(x.real) <= J)):
            raise SingularityError("G has poles at j - i")
        out = np.asarray(g_truncated_product(x, J, tail=tail)) if tail else _truncated(x, J)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return out[()] if out.ndim == 0 else out


def phi_eval(x):
    """``phi(x) = Gamma(x - 1 + i) / (sqrt(pi) Gamma(x - i))``."""
    x = np.asarray(x, dtype=complex)
    p = x - 1 + 1j
    if np.any((p.imag == 0) & (p.real <= 0) & (p.real == np.round(p.real))):
        raise SingularityError("phi has poles at 1 - i - k")
    out = np.exp(complex_loggamma(x - 1 + 1j) - complex_loggamma(x - 1j)) / _SQRT_PI
    return out[()] if out.ndim == 0 else out


class ScriptB(NamedTuple):
    values: np.ndarray
    tail_bound: float


def script_B(n: int, x, J_low: int | None = None, correct_tail: bool = True) -> ScriptB:
    """``B_n(x) = prod_{j<n} G(2^j x)`` on real ``x``.

    The factors with ``J_low <= j < n`` are multiplied out.  The rest is
    ``exp(c1 x 2^J_low + c3 x^3 8^J_low / 7 + ...)`` from the odd Taylor
    series of ``log G``; with ``correct_tail`` the first two terms are
    applied.  ``tail_bound`` is ``TAIL_CONSTANT * max|x| * 2^J_low``, the size
    of the omitted factors before correction.
    """
    x = np.asarray(x, dtype=float)
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    if J_low is None:
        # place the cut where 2^J |x| is about 2^-12
        J_low = min(n, -12 - int(math.ceil(math.log2(xmax))) if xmax > 0 else n)
    J_low = min(J_low, n)
    out = np.ones(x.shape, complex)
    for j in range(J_low, n):
        out = out * _closed_form(np.ldexp(x, j).astype(complex))
    if correct_tail:
        y = np.ldexp(x, J_low)
        out = out * np.exp(_C1 * y + _C3 * y**3 / 7.0)
    bound = TAIL_CONSTANT * xmax * 2.0**J_low
    return ScriptB(out[()] if out.ndim == 0 else out, bound)


def wavelet_eval(idx: WaveletIndex, x, J_low: int | None = None):
    """``phi_{n,j}(x) = 2^{n/2} phi(2^n x - j) B(2^n x)`` on real ``x``."""
    n, j = int(idx[0]), int(idx[1])
    x = np.asarray(x, dtype=float)
    u = np.ldexp(x, n)
    # B(2^n x) = B_n(x); evaluate in u to share one product
    b = script_B(0, u, None if J_low is None else J_low).values
    return 2.0 ** (n / 2) * np.asarray(phi_eval(u - j)) * b


class WaveletGram(NamedTuple):
    indices: list
    gram: np.ndarray
    tail_bound: np.ndarray


class _PairIntegrand:
    """Integrand of ``<phi_{n,j}, phi_{n+d,jp}>`` in ``u = 2^n x``, d >= 0.

    The generator samples and the finite ``G`` products are cached per
    node set, since a Gram matrix reuses them across many pairs.
    """

    def __init__(self, u: np.ndarray):
        self.u = u
        self._phi = {}
        self._ratio = {}

    def phi(self, d: int, j: int) -> np.ndarray:
        if (d, j) not in self._phi:
            self._phi[d, j] = 2.0 ** (d / 2) * np.asarray(phi_eval(np.ldexp(self.u, d) - j))
        return self._phi[d, j]

    def ratio(self, d: int) -> np.ndarray:
        # B_n / B_{n+d} = conj(prod_{k<d} G(2^k u)) for real u
        if d not in self._ratio:
            r = np.ones(self.u.shape, complex)
            for k in range(d):
                r = r * np.conj(_closed_form(np.ldexp(self.u, k).astype(complex)))
            self._ratio[d] = r
        return self._ratio[d]

    def __call__(self, d: int, j: int, jp: int) -> np.ndarray:
        out = self.phi(0, j) * np.conj(self.phi(d, jp))
        return out * self.ratio(d) if d else out


def wavelet_gram(indices, half_width: float = 512.0, n: int = 2**18,
                 tail_order: int = 64) -> WaveletGram:
    """Gram matrix ``<phi_a, phi_b>`` for a list of wavelet indices.

    Each entry is reduced to one integral in ``u = 2^n x`` at the coarser of
    the two scales, where the dyadic products cancel down to finitely many
    ``G`` factors.  The trapezoid rule covers ``[-L, L]``.  Same-scale
    entries are not oscillatory at infinity and get mapped-quadrature tails.
    Cross-scale tails are left out; ``tail_bound`` holds the Cauchy-Schwarz
    bound on every omitted tail.
    """
    idx = [WaveletIndex(int(a), int(b)) for a, b in indices]
    L = float(half_width)
    h = 2 * L / n
    t, w = tail_nodes(L, tail_order)
    window = _PairIntegrand(-L + h * np.arange(n))
    ends = _PairIntegrand(np.array([-L, L]))
    right, left = _PairIntegrand(t), _PairIntegrand(-t)
    k = len(idx)
    gram = np.zeros((k, k), complex)
    bound = np.zeros((k, k))
    for p in range(k):
        for q in range(p, k):
            a, b = idx[p], idx[q]
            swap = a.n > b.n
            if swap:
                a, b = b, a
            d = b.n - a.n
            e = ends(d, a.j, b.j)
            entry = np.sum(window(d, a.j, b.j)) * h + 0.5 * h * (e[1] - e[0])
            if d == 0:
                entry = entry + np.sum((right(0, a.j, b.j) + left(0, a.j, b.j)) * w)
            else:
                mass_a = np.sum((np.abs(right.phi(0, a.j)) ** 2 + np.abs(left.phi(0, a.j)) ** 2) * w)
                mass_b = np.sum((np.abs(right.phi(d, b.j)) ** 2 + np.abs(left.phi(d, b.j)) ** 2) * w)
                bound[p, q] = math.sqrt(mass_a * mass_b)
            if swap:
                entry = np.conj(entry)
            gram[p, q] = entry
            gram[q, p] = np.conj(entry)
            bound[q, p] = bound[p, q]
    return WaveletGram(idx, gram, bound)
