"""
Symbols, quantization and the class fit
=======================================

Build an oscillating symbol of order m = -1/2 and type (1/2, 1/2), apply it
to a random trigonometric polynomial, and recover (m, rho, delta) from the
measured seminorms.
"""

import numpy as np

from torus_pdo import (
    TorusGrid,
    apply_operator,
    fit_symbol_class,
    make_bessel_symbol,
    make_oscillating_symbol,
    random_trig_polynomial,
    seminorms,
)

grid = TorusGrid(1, 256)
f = random_trig_polynomial(grid, seed=0, trial=0)

# the identity symbol reproduces f
one = make_bessel_symbol(grid, None, 0.0)
print("identity error:", np.max(np.abs(apply_operator(one, f).samples - f.samples)))

# an oscillating member of S^{-1/2}_{1/2,1/2}
sigma = make_oscillating_symbol(grid, None, -0.5, 0.5, 0.5, seed=1)
Tf = apply_operator(sigma, f)
print("||f||_2 = %.4f   ||T f||_2 = %.4f" % (np.sqrt(np.mean(np.abs(f.samples) ** 2)),
                                            np.sqrt(np.mean(np.abs(Tf.samples) ** 2))))

# seminorms on dyadic shells, then a least-squares fit of the class exponents
fit = fit_symbol_class(seminorms(sigma, 2, 2))
print("claimed (m, rho, delta) = (-0.5, 0.5, 0.5)")
print("fitted  (m, rho, delta) = (%.3f, %.3f, %.3f)" % (fit.m_hat, fit.rho_hat, fit.delta_hat))
for note in fit.notes:
    print("  note:", note)
