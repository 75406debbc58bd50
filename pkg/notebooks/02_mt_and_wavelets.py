"""
Rational bases on the line
==========================

Malmquist-Takenaka functions for a handful of poles, and the holomorphic
wavelets built from the Gamma-function generator.
"""

# %%
import numpy as np

from holophase.mt import MTBasisSpec, mt_analyze, mt_gram, mt_synthesize
from holophase.multiscale import G_eval, phi_eval, wavelet_gram
from holophase.numerics import LineGrid

grid = LineGrid(256.0, 2**15)
spec = MTBasisSpec.of([1j, 2 + 0.5j, -1 + 2j, 0.3 + 0.2j])

# %% Orthonormality, with the tails beyond the window integrated
print("Gram error:", np.max(np.abs(mt_gram(spec, grid) - np.eye(4))))

# %% Synthesis and analysis; the window costs O(1/L) for functions decaying like 1/x
c = np.array([1.0, -0.5j, 0.25, 0.1])
back = mt_analyze(mt_synthesize(c, spec, grid), spec)
print("recovered:", np.round(back.values, 4))
print("error within tail bound:", bool(np.all(np.abs(back.values - c) <= back.tail_bound)))

# %% G is unimodular on the line and 1-periodic
x = np.linspace(-3, 3, 7)
print("|G| on the line:", np.abs(G_eval(x)))
print("|phi| near 0:", np.abs(phi_eval(np.array([-1.0, 0.0, 1.0]))))

# %% A small wavelet Gram matrix across two scales
W = wavelet_gram([(0, 0), (0, 1), (1, 0)], half_width=256.0, n=2**16)
print(np.round(np.abs(W.gram), 6))
