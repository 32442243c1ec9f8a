"""
Dyadic kernel pieces and their weighted norms
=============================================

Split a symbol into Littlewood-Paley pieces, synthesize the kernel of each
piece and watch the weighted L^2 norms grow like 2^{k(m + n/r)}, with one
extra power of 2^k for the u-gradient.
"""

import numpy as np

from torus_pdo import ExperimentSpec, run_check

rep = run_check(ExperimentSpec("kernel_decay", n=1, r=2.0, rho=0.5, m=-0.25, N=512))
print("k:", rep.measured["k"])
for mode in ("plain", "grad_y", "grad_u"):
    norms = np.round(rep.measured["norm_" + mode], 3)
    print("%-7s norms %s  slope %.3f  (predicted at most %.3f)"
          % (mode, norms, rep.measured["slope_" + mode], rep.predicted["slope_" + mode]))
print("gap between grad_u and plain slopes: %.3f (predicted 1)" % rep.measured["slope_gap"])
print("verdict:", rep.verdict)
