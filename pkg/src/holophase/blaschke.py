"""Blaschke products on the unit disk and on the upper half-plane."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, SingularityError, SizeError
from .numerics import CircleGrid, LineGrid, Signal, hardy_project

__all__ = [
    "BlaschkeSpec",
    "PhaseDecomposition",
    "ConditionReport",
    "eval_blaschke",
    "blaschke_condition",
    "blaschke_phase",
    "sigmoid",
    "invariant_projection",
]

# zeros closer than this to +-i use the "0/0 = 1" convergence-factor rule
DEGENERATE_TOL = 1e-12
# switch to log-space evaluation above this many (expanded) zeros
LOG_SPACE_THRESHOLD = 64


@dataclass(frozen=True)
class BlaschkeSpec:
    """Zeros, multiplicities and normalization of a finite Blaschke product.

    Parameters
    ----------
    domain : {"disk", "halfplane"}
    zeros : sequence of (position, multiplicity)
        Plain complex numbers are accepted and get multiplicity 1.
    nu : int
        Power of the monomial factor ``z**nu`` (disk only).
    prefactor : complex
        Unimodular constant in front of the product.
    normalized : bool
        Use the convergence factors ``conj(a)/|a|`` (disk) or
        ``|1+a^2|/(1+a^2)`` (half-plane).  With ``False`` the bare factors
        ``(z-a)/(1-conj(a) z)`` and ``(x-a)/(x-conj(a))`` are used.
    """

    domain: Literal["disk", "halfplane"]
    zeros: tuple = ()
    nu: int = 0
    prefactor: complex = 1.0
    normalized: bool = True

    def __post_init__(self):
        if self.domain not in ("disk", "halfplane"):
            raise DomainError(f"unknown domain {self.domain!r}")
        packed = []
        for item in self.zeros:
            if isinstance(item, (tuple, list)):
                a, m = complex(item[0]), int(item[1])
            else:
                a, m = complex(item), 1
            if m < 1:
                raise DomainError("multiplicities must be >= 1")
            if self.domain == "disk" and not abs(a) < 1:
                raise DomainError(f"disk zero {a} is not inside the unit disk")
            if self.domain == "halfplane" and not a.imag > 0:
                raise DomainError(f"half-plane zero {a} is not in the upper half-plane")
            packed.append((a, m))
        object.__setattr__(self, "zeros", tuple(packed))
        if self.nu < 0:
            raise DomainError("nu must be nonnegative")
        if self.domain == "halfplane" and self.nu:
            raise DomainError("the monomial factor only exists on the disk")
        if abs(abs(complex(self.prefactor)) - 1) > 1e-12:
            raise DomainError("prefactor must be unimodular")

    @property
    def expanded_zeros(self) -> np.ndarray:
        return np.array([a for a, m in self.zeros for _ in range(m)], dtype=complex)

    @property
    def degree(self) -> int:
        return self.nu + sum(m for _, m in self.zeros)


class PhaseDecomposition(NamedTuple):
    """Centers and scales of the sigmoid units, ``a_j = center_j + i*scale_j``."""

    centers: np.ndarray
    scales: np.ndarray


def _factor_constants(spec: BlaschkeSpec, zeros: np.ndarray) -> np.ndarray:
    if not spec.normalized:
        return np.ones_like(zeros)
    if spec.domain == "disk":
        c = np.ones_like(zeros)
        nz = np.abs(zeros) > 0
        # conj(a)/|a| through the angle, safe for subnormal moduli
        c[nz] = np.exp(-1j * np.angle(zeros[nz]))
        return c
    s = 1.0 + zeros**2
    c = np.ones_like(zeros)
    ok = np.abs(s) > DEGENERATE_TOL
    c[ok] = np.abs(s[ok]) / s[ok]
    return c


def _factors(spec: BlaschkeSpec, zeros: np.ndarray, z: np.ndarray):
    # numerators and denominators, shape (len(z), len(zeros))
    if spec.domain == "disk":
        num = z[:, None] - zeros[None, :]
        den = 1.0 - zeros.conj()[None, :] * z[:, None]
    else:
        num = z[:, None] - zeros[None, :]
        den = z[:, None] - zeros.conj()[None, :]
    return num, den


def eval_blaschke(spec: BlaschkeSpec, z):
    """Evaluate the Blaschke product at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    zeros = spec.expanded_zeros
    const = complex(spec.prefactor) * np.prod(_factor_constants(spec, zeros))
    num, den = _factors(spec, zeros, zf)
    if np.any(np.abs(den) == 0):
        raise SingularityError("evaluation at a pole of the Blaschke product")
    if len(zeros) > LOG_SPACE_THRESHOLD:
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log(num) - np.log(den)
        zero_hit = np.any(num == 0, axis=1)
        # modulus and phase summed separately
        with np.errstate(invalid="ignore"):
            phase = np.mod(logs.imag.sum(axis=1), 2 * np.pi)
            out = np.exp(logs.real.sum(axis=1)) * np.exp(1j * phase)
        out[zero_hit] = 0.0
    else:
        out = np.prod(num / den, axis=1) if len(zeros) else np.ones(zf.shape, complex)
    if spec.domain == "disk" and spec.nu:
        out = out * zf**spec.nu
    out = const * out
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


class ConditionReport(NamedTuple):
    sum: float
    partial_sums: np.ndarray
    verdict: Literal["convergent", "divergent-trend"]


def blaschke_condition(zeros: Sequence[complex], threshold: float = 100.0) -> ConditionReport:
    """Partial sums of ``Im a / (1 + |a|^2)`` over a half-plane zero family.

    A finite family can never prove divergence.  The verdict reads
    ``"divergent-trend"`` once the running sum passes ``threshold``; the whole
    partial-sum sequence is returned so the trend can be inspected.
    """
    a = np.asarray(zeros, dtype=complex).ravel()
    if np.any(a.imag <= 0):
        raise DomainError("zeros must lie in the open upper half-plane")
    terms = a.imag / (1.0 + np.abs(a) ** 2)
    partial = np.cumsum(terms)
    total = float(partial[-1]) if len(partial) else 0.0
    verdict = "divergent-trend" if total > threshold else "convergent"
    return ConditionReport(total, partial, verdict)


def sigmoid(x):
    """``arctan(x) + pi/2``, increasing from 0 to pi."""
    return np.arctan(x) + 0.5 * np.pi


def phase_units(spec: BlaschkeSpec) -> PhaseDecomposition:
    if spec.domain != "halfplane":
        raise DomainError("phase units are defined for half-plane products")
    a = spec.expanded_zeros
    return PhaseDecomposition(a.real, a.imag)


def blaschke_phase(spec: BlaschkeSpec, x):
    """Sum of sigmoid units ``sum_j sigma((x - alpha_j) / beta_j)``.

    Each unit is half the continuous argument of one Blaschke factor, so
    ``exp(2j * blaschke_phase(spec, x)) * c == eval_blaschke(spec, x)`` with
    ``c`` the product of the convergence constants and the prefactor.  The
    phase vanishes as ``x -> -inf``.
    """
    centers, scales = phase_units(spec)
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for c, s in zip(centers, scales):
        out = out + sigmoid((x - c) / s)
    return out[()] if out.ndim == 0 else out


def phase_constant(spec: BlaschkeSpec) -> complex:
    """Unimodular ``c`` with ``B(x) = c * exp(2i * blaschke_phase(x))``."""
    zeros = spec.expanded_zeros
    return complex(spec.prefactor) * complex(np.prod(_factor_constants(spec, zeros)))


def boundary_values(spec: BlaschkeSpec, grid) -> np.ndarray:
    """Samples of the product on the grid's boundary points."""
    if spec.domain == "disk" and not isinstance(grid, CircleGrid):
        raise SizeError("disk products live on a circle grid")
    if spec.domain == "halfplane" and not isinstance(grid, LineGrid):
        raise SizeError("half-plane products live on a line grid")
    return eval_blaschke(spec, grid.points)


def invariant_projection(spec: BlaschkeSpec, f: Signal) -> Signal:
    """Orthogonal projection of ``f`` onto ``B * H^2``: ``B * P_+(conj(B) * f)``."""
    b = boundary_values(spec, f.grid)
    inner = hardy_project(Signal(f.grid, b.conj() * f.samples))
    return Signal(f.grid, b * inner.samples)

