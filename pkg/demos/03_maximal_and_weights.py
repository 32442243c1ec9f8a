"""
Maximal functions and Muckenhoupt weights
=========================================

Compare the Hardy-Littlewood and sharp maximal functions of a pseudo-
differential output, then compute A_p constants of two weights.
"""

import numpy as np

from torus_pdo import (
    TorusGrid,
    Weight,
    apply_operator,
    hardy_littlewood,
    make_oscillating_symbol,
    muckenhoupt_constant,
    random_trig_polynomial,
    sharp_maximal,
)

grid = TorusGrid(1, 256)
f = random_trig_polynomial(grid, seed=0, trial=0)
sigma = make_oscillating_symbol(grid, None, -0.25, 0.5, 0.5)
Tf = apply_operator(sigma, f)

Mf = hardy_littlewood(f, 2.0).array
sharp = sharp_maximal(Tf, 2.0).array
print("max |f| = %.3f, max M_2 f = %.3f" % (np.max(np.abs(f.samples)), Mf.max()))
print("max M#_2(Tf) / M_2 f = %.3f" % np.max(sharp / Mf))

# A_p constants: a smooth weight that vanishes nowhere, and a power weight
smooth = Weight.from_callable(grid, lambda x: 0.1 + np.sin(np.pi * x[..., 0]) ** 2)
power = Weight.from_callable(grid, lambda x: np.abs(x[..., 0] - 0.5 + 0.5 / 256) ** 0.5)
for p in (1.5, 2.0, 4.0):
    print("p = %.1f   A_p(0.1 + sin^2) = %.4f   A_p(|x|^0.5) = %.4f"
          % (p, muckenhoupt_constant(smooth, p), muckenhoupt_constant(power, p)))
