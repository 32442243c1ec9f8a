"""L^p, Sobolev and Besov norms of periodic functions.

Besov blocks use ``F phi_k(xi) = phi(2^-k xi)`` with ``phi`` the annular bump
``psi_hat`` of :mod:`torus_pdo.symbols` (supported in ``1/2 <= |xi| <= 2``),
and the low block multiplier ``1 - sum_{k>=1} phi(2^-k xi)``.

The dilation ``phi(2^k xi)`` is sometimes written instead; on the lattice it
would support every block with k >= 1 in ``|xi| <= 2^{1-k} <= 1``, where
``phi`` vanishes away from zero, so all blocks would be zero.  Only the
``phi(2^-k xi)`` reading is implemented.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quantize import bessel_potential
from .symbols import psi_hat
from .torus_core import PeriodicFunction, SpectralCoefficients, forward_dft, inverse_dft

__all__ = [
    "BesovBlocks",
    "lp_norm",
    "sobolev_norm",
    "besov_decompose",
    "besov_norm",
    "default_besov_K",
]


def lp_norm(f: PeriodicFunction, p: float) -> float:
    """``(N^{-n} sum |f|^p)^{1/p}``; the max for ``p = inf``."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.samples)
    if np.isinf(p):
        return float(a.max())
    return float(np.mean(a**p) ** (1.0 / p))


def sobolev_norm(f: PeriodicFunction, s: float, p: float) -> float:
    """``||J^s f||_p``."""
    if not (1.0 < p < np.inf):
        raise ValueError(f"p must lie in (1, inf), got {p}")
    return lp_norm(bessel_potential(s, f), p)


@dataclass(frozen=True, eq=False)
class BesovBlocks:
    psi_part: PeriodicFunction = field(repr=False)
    blocks: tuple = field(repr=False)

    @property
    def K(self) -> int:
        return len(self.blocks)

    def reconstruct(self) -> PeriodicFunction:
        total = self.psi_part.samples.copy()
        for b in self.blocks:
            total = total + b.samples
        return PeriodicFunction(self.psi_part.grid, total)


def default_besov_K(N: int) -> int:
    """Largest admissible block count, ``2^{K+1} = N/2``."""
    return N.bit_length() - 3


def besov_decompose(f: PeriodicFunction, K: int) -> BesovBlocks:
    """``psi * f`` and ``phi_k * f`` for k = 1..K as spectral multiplications.

    The blocks resolve frequencies up to ``|xi| <= 2^K``; beyond that the
    infinite block sum is truncated.
    """
    N = f.grid.N
    if K < 1 or 2 ** (K + 1) > N // 2:
        raise ValueError(f"K={K} too large for N={N}: need 1 <= K and 2^(K+1) <= N/2")
    c = forward_dft(f)
    r = c.window.norms()
    kmax = int(np.ceil(np.log2(max(r.max(), 1.0)))) + 2
    low = 1.0 - sum(psi_hat(r / 2.0**k) for k in range(1, kmax + 1))
    psi_part = inverse_dft(SpectralCoefficients(c.window, c.coeffs * low), f.grid)
    blocks = tuple(
        inverse_dft(SpectralCoefficients(c.window, c.coeffs * psi_hat(r / 2.0**k)), f.grid)
        for k in range(1, K + 1)
    )
    return BesovBlocks(psi_part, blocks)


def besov_norm(f: PeriodicFunction, s: float, p: float, q: float, K: int | None = None) -> float:
    """``||psi*f||_p + (sum_k (2^{sk} ||phi_k*f||_p)^q)^{1/q}``, sup over k for ``q = inf``."""
    if not (1.0 < p < np.inf):
        raise ValueError(f"p must lie in (1, inf), got {p}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    K = default_besov_K(f.grid.N) if K is None else K
    dec = besov_decompose(f, K)
    terms = np.array([2.0 ** (s * k) * lp_norm(b, p) for k, b in enumerate(dec.blocks, start=1)])
    if np.isinf(q):
        tail = float(terms.max(initial=0.0))
    else:
        tail = float(np.sum(terms**q) ** (1.0 / q))
    return lp_norm(dec.psi_part, p) + tail
