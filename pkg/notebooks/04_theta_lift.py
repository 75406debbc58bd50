"""
Slices of a planar image
========================

Each direction theta gives a holomorphic function on the upper half-plane.
Averaging them recovers the image, its Poisson extension and, with an
angular weight, singular integrals such as the Riesz transforms.
"""

# %%
import numpy as np

from holophase.theta_lift import (
    Image2D,
    cz_apply,
    dirichlet_gram,
    harmonic_extend,
    isometry_report,
    poisson_extend,
    riesz,
    slice_family,
)

img = Image2D.from_function(lambda a, b: np.exp(-np.pi * (a * a + b * b)), 512, 8.0)

# %% The three norm identities; the Hardy side is 1/(4 sqrt 2) for this image
for name, line in isometry_report(img).items():
    print(f"{name:9s} lhs {line.lhs:.9f}  rhs {line.rhs:.9f}  gap {line.gap:.1e}")

# %% Harmonic extension two ways
fam = slice_family(img, 256)
print(harmonic_extend(fam, (0.2, 0.1, 0.5)), poisson_extend(img, 0.2, 0.1, 0.5)[0])

# %% Identity multiplier and the Riesz pair
print("identity:", np.max(np.abs(cz_apply(img, lambda t: np.ones_like(t), family=fam).samples - img.samples)))
r1, r2 = riesz(img, 1), riesz(img, 2)
print("R1 energy", r1.energy(), "R2 energy", r2.energy(), "f energy", img.energy())

# %% An orthonormal system of the Dirichlet space, refined three times
G = dirichlet_gram(N=4, K=2)
print("Gram error by refinement level:", G.refinement)
