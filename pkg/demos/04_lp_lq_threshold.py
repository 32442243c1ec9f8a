"""
The L^p -> L^q order threshold
==============================

At p = 4/3, q = 4 and rho = delta = 1/2 the threshold order is -1/2.  At the
threshold the estimated norms stay flat as the grid is refined; half an
order above it, the multiplier <xi>^0 = identity has norm N^{1/2}, so the
estimates grow by sqrt(2) per doubling.
"""

from torus_pdo import ExperimentSpec, run_check

for family in ("oscillating", "bessel"):
    rep = run_check(ExperimentSpec("lp_lq", p=4 / 3, q=4.0, symbol=family))
    ms = rep.measured
    print(family)
    print("  threshold m = %.3f (case %d)" % (rep.predicted["m_threshold"], rep.predicted["case"]))
    print("  N               ", ms["N"])
    print("  norms at m      ", [round(v, 3) for v in ms["norms"]])
    print("  norms at m + 1/2", [round(v, 3) for v in ms["probe_norms"]])
    print("  verdict:", rep.verdict)
