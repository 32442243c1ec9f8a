"""Pseudo-differential operators on the torus, discretized on uniform grids.

Submodules
----------
torus_core   grids, frequency windows and the discrete Fourier pair
symbols      symbols, difference operators, class fits, dyadic decomposition
quantize     operator application, kernels, operator norms
maximal      maximal functions, Muckenhoupt constants, weighted norms
spaces       L^p, Sobolev and Besov norms
harness      resolution-stability experiments
io           binary dumps with JSON sidecars
"""

from .torus_core import (
    LatticeWindow,
    PeriodicFunction,
    SpectralCoefficients,
    TorusGrid,
    bracket,
    forward_dft,
    inverse_dft,
    random_trig_polynomial,
    trig_polynomial,
)
from .symbols import (
    Symbol,
    SymbolClass,
    difference_op,
    fit_symbol_class,
    littlewood_paley_split,
    make_bessel_symbol,
    make_multiplier_symbol,
    make_oscillating_symbol,
    seminorms,
    x_derivative,
)
from .quantize import (
    apply_operator,
    bessel_potential,
    operator_norm_estimate,
    synthesize_kernel,
    weighted_kernel_norm,
)
from .maximal import CubeFamily, Weight, hardy_littlewood, muckenhoupt_constant, sharp_maximal, weighted_lp_norm
from .spaces import besov_decompose, besov_norm, lp_norm, sobolev_norm
from .harness import ExperimentReport, ExperimentSpec, run_check

__version__ = "0.1.0"
