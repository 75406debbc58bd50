"""
Iterating a Blaschke product
============================

Zeros of the iterates accumulate at the circle while the iterates
themselves contract towards the interior fixed point.  The phase portraits
are written as PPM files next to this script.
"""

# %%
from pathlib import Path

import numpy as np

from holophase.dynamics import (
    FIG1_MAP,
    FIG2_MAP,
    RasterImage,
    fixed_point,
    iterate_zeros,
    render,
    write_pgm,
    write_ppm,
)

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

# %% Zero counts and the partial sums of 1 - |a_j|
for n in range(1, 7):
    Z = iterate_zeros(FIG1_MAP, n)
    print(n, Z.count, round(Z.divergence_partial, 4))
fp = fixed_point(FIG1_MAP)
print("fixed point", fp.alpha, "multiplier", fp.multiplier)

# %% Phase and modulus portraits in the chart z = exp(-y + i x)
template = RasterImage(1024, 512)
for n in (1, 3, 5):
    write_ppm(render(FIG1_MAP, n, template), out / f"fig1_phase_{n}.ppm")
write_ppm(render(FIG2_MAP, 4, template), out / "fig2_phase_4.ppm")
write_pgm(render(FIG2_MAP, 4, template, "neglog_modulus"), out / "fig2_modulus_4.pgm")
print(sorted(p.name for p in out.iterdir()))
