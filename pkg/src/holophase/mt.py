"""Malmquist-Takenaka bases of the Hardy space of the upper half-plane."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, SingularityError, SizeError
from .numerics import LineGrid, Signal, line_integral, tail_nodes

__all__ = [
    "MTBasisSpec",
    "MTCoefficients",
    "mt_function",
    "mt_matrix",
    "mt_analyze",
    "mt_synthesize",
    "mt_gram",
    "repeated_pole_form",
]


@dataclass(frozen=True)
class MTBasisSpec:
    """Ordered zeros ``a_0, a_1, ...`` in the upper half-plane (repeats allowed)."""

    zeros: tuple

    def __post_init__(self):
        z = tuple(complex(a) for a in self.zeros)
        if any(not a.imag > 0 for a in z):
            raise DomainError("MT zeros must lie in the open upper half-plane")
        object.__setattr__(self, "zeros", z)

    def __len__(self):
        return len(self.zeros)

    @classmethod
    def of(cls, zeros: Sequence[complex]) -> "MTBasisSpec":
        return cls(tuple(zeros))


def mt_function(spec: MTBasisSpec, n: int, x, normalized: bool = True):
    """Evaluate the n-th MT function at ``x``.

    ``phi_n(x) = c_n * prod_{j<n} (x - a_j)/(x - conj(a_j)) / (x - conj(a_n))``
    with ``c_n = sqrt(Im a_n / pi)`` (unit norm).  ``normalized=False`` uses
    the constant ``1/sqrt(pi)``, which has norm ``Im(a_n)**-0.5``.
    """
    if not 0 <= n < len(spec):
        raise IndexError(f"basis index {n} out of range for {len(spec)} zeros")
    x = np.asarray(x, dtype=complex)
    a = np.asarray(spec.zeros[: n + 1])
    if np.any(x[..., None] == a.conj()):
        raise SingularityError("evaluation at a pole of an MT function")
    out = 1.0 / (x - a[n].conj())
    for aj in a[:n]:
        out = out * (x - aj) / (x - aj.conj())
    const = np.sqrt(a[n].imag / np.pi) if normalized else 1.0 / np.sqrt(np.pi)
    out = const * out
    return out[()] if out.ndim == 0 else out


def mt_matrix(spec: MTBasisSpec, x, normalized: bool = True) -> np.ndarray:
    """All basis functions at once, shape ``(len(spec), len(x))``."""
    x = np.asarray(x, dtype=complex)
    a = np.asarray(spec.zeros)
    out = np.empty((len(a),) + x.shape, dtype=complex)
    running = np.ones(x.shape, dtype=complex)
    for n, an in enumerate(a):
        const = np.sqrt(an.imag / np.pi) if normalized else 1.0 / np.sqrt(np.pi)
        out[n] = const * running / (x - an.conj())
        running = running * (x - an) / (x - an.conj())
    return out


class MTCoefficients(NamedTuple):
    values: np.ndarray
    tail_bound: np.ndarray


def mt_analyze(f: Signal, spec: MTBasisSpec) -> MTCoefficients:
    """Coefficients ``<f, phi_n>`` over the grid window.

    The tail bound is a Cauchy-Schwarz estimate of the part of each inner
    product lying outside ``[-L, L]``, assuming ``|f|`` decays like ``1/|x|``
    from its edge samples.
    """
    if not isinstance(f.grid, LineGrid):
        raise SizeError("MT analysis needs a line grid")
    basis = mt_matrix(spec, f.grid.points)
    coef = basis.conj() @ f.samples * f.grid.spacing
    L = f.grid.half_width
    edge = max(abs(f.samples[0]), abs(f.samples[-1]))
    f_tail = np.sqrt(2.0 * edge**2 * L)
    t, w = tail_nodes(L, 48)
    phi_tail = np.sqrt(np.sum((np.abs(mt_matrix(spec, t)) ** 2 + np.abs(mt_matrix(spec, -t)) ** 2) * w, axis=1))
    return MTCoefficients(coef, f_tail * phi_tail)


def mt_synthesize(coefficients, spec: MTBasisSpec, grid: LineGrid) -> Signal:
    """``sum_n c_n phi_n`` sampled on ``grid``."""
    c = np.asarray(coefficients, dtype=complex).ravel()
    if len(c) > len(spec):
        raise SizeError("more coefficients than basis functions")
    if len(c) == 0:
        return Signal(grid, np.zeros(grid.n, complex))
    sub = MTBasisSpec(spec.zeros[: len(c)])
    return Signal(grid, c @ mt_matrix(sub, grid.points))


def mt_gram(spec: MTBasisSpec, grid: LineGrid, tails: bool | str = True) -> np.ndarray:
    """Gram matrix of the basis on ``grid``.

    ``tails`` picks the treatment of ``|x| > L``: ``True`` integrates the
    tails by mapped quadrature, ``False`` drops them (error of order
    ``1/L``), and ``"asymptotic"`` adds the leading term
    ``phi_m conj(phi_n) ~ sqrt(Im a_m Im a_n)/(pi x^2)``, which leaves an
    error of order ``1/L^3`` since the next term is odd.
    """
    def integrand(x):
        b = mt_matrix(spec, x)
        return b[:, None, :] * b.conj()[None, :, :]

    if tails == "asymptotic":
        gram, _ = line_integral(integrand, grid, tails=False)
        c = np.sqrt(np.array([a.imag for a in spec.zeros]) / np.pi)
        return gram + 2.0 / grid.half_width * np.outer(c, c)
    if not isinstance(tails, bool):
        raise DomainError(f"unknown tail treatment {tails!r}")
    gram, _ = line_integral(integrand, grid, tails=tails)
    return gram


def repeated_pole_form(a: complex, M: int, x):
    """The ``M`` basis functions attached to a pole of order ``M`` at ``conj(a)``.

    ``sqrt(Im a/pi) * exp(i n theta(x)) / (x - conj(a))`` for ``n < M`` where
    ``exp(i theta(x)) = (x - a)/(x - conj(a))``.  Returns shape ``(M,) + x.shape``.
    """
    a = complex(a)
    if not a.imag > 0:
        raise DomainError("pole parameter must lie in the upper half-plane")
    x = np.asarray(x, dtype=complex)
    e = (x - a) / (x - a.conjugate())
    base = np.sqrt(a.imag / np.pi) / (x - a.conjugate())
    return np.stack([base * e**n for n in range(M)])
