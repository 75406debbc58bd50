"""
Blaschke unwinding of a polynomial
==================================

Factor a signal on the circle into a Blaschke part and an outer part, then
iterate.  The coefficients carry the energy; the residual shrinks fast.
"""

# %%
import numpy as np

from holophase.numerics import CircleGrid, Signal, winding_number
from holophase.unwinding import remarkable_series_error, unwind, weiss_factorize

grid = CircleGrid(4096)
z = grid.points

# %% One factorization.  The zeros of F inside the disk all go into B.
zeros = np.array([0.5, -0.3 + 0.6j, 0.8j])
F = Signal(grid, (2 - 1j) * np.prod(z[:, None] - zeros, axis=1))
B, G, _ = weiss_factorize(F)
print("winding of F, B, G:", winding_number(F.samples), winding_number(B.samples), winding_number(G.samples))
print("max ||B| - 1|:", np.max(np.abs(np.abs(B.samples) - 1)))

# %% The unwinding series and its energy balance
res = unwind(F, depth=12)
for k, level in enumerate(res.levels, 1):
    print(f"level {k:2d}  a = {level.coefficient:.6f}  winding {level.winding}")
print("energy:", F.energy(), "=", np.sum(np.abs(res.coefficients) ** 2) + res.residual.energy())

# %% exp(2 pi i / x) from the Blaschke product with zeros 1/(j + i); errors fall like e^{-2 pi N}
x = np.linspace(0.1, 10, 500)
for N in range(7):
    print(N, remarkable_series_error(x, N))
