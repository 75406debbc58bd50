"""Phase unwinding, holomorphic orthonormal bases and slice lifts of planar images.

Modules
-------
numerics     grids, signals, unitary DFT, special functions, quadrature
blaschke     finite Blaschke products and their phase
mt           Malmquist-Takenaka bases of the half-plane Hardy space
unwinding    Weiss factorization by FFT and the unwinding series
multiscale   an explicit holomorphic wavelet basis
dynamics     iterated Blaschke maps, zeros and phase rasters
theta_lift   slice functions, isometries, rotation method, Dirichlet basis
io, cli      file formats and the command line
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateInputError,
    DomainError,
    HolophaseError,
    NoFixedPointError,
    NumericalInstabilityError,
    SingularityError,
    SizeError,
)

__all__ = [
    "__version__",
    "HolophaseError",
    "SizeError",
    "SingularityError",
    "DomainError",
    "DegenerateInputError",
    "NumericalInstabilityError",
    "NoFixedPointError",
]
