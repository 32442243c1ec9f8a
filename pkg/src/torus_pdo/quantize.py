"""Quantization of discrete symbols, dyadic kernels and operator norms.

``T_sigma f(x) = sum_xi e^{2 pi i x.xi} sigma(x, xi) f^(xi)`` is evaluated
exactly on the grid for the truncated window.  The phase factors come from
a table of N-th roots of unity indexed by ``(j . xi) mod N``, so they carry
no accumulated angle error.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .symbols import Symbol
from .torus_core import (
    PeriodicFunction,
    SpectralCoefficients,
    TorusGrid,
    bracket,
    forward_dft,
    inverse_dft,
    random_trig_polynomial,
)

logger = logging.getLogger(__name__)

__all__ = [
    "KERNEL_ENTRY_CAP",
    "KernelSlice",
    "OperatorNormEstimate",
    "apply_operator",
    "apply_operator_batch",
    "operator_matrix",
    "bessel_potential",
    "synthesize_kernel",
    "apply_kernel",
    "weighted_kernel_norm",
    "adjoint_apply",
    "operator_norm_estimate",
    "periodic_distance",
    "lp_norm_samples",
]

# dense kernels/matrices with more entries than this are refused
KERNEL_ENTRY_CAP = 2**28

_ROW_CHUNK_ENTRIES = 2**22


def _check_grid(sigma: Symbol, grid: TorusGrid):
    if sigma.grid != grid:
        raise ValueError(f"symbol grid (n={sigma.n}, N={sigma.N}) does not match function grid "
                         f"(n={grid.n}, N={grid.N})")


def _phase_rows(grid: TorusGrid, rows: slice) -> np.ndarray:
    """``e^{2 pi i x_j . xi}`` for grid rows ``j`` in ``rows`` and every window frequency."""
    n, N = grid.n, grid.N
    J = grid.indices().reshape(-1, n)[rows]
    XI = grid.window().frequencies().reshape(-1, n)
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    return roots[(J @ XI.T) % N]


def _row_chunks(grid: TorusGrid):
    step = max(1, _ROW_CHUNK_ENTRIES // grid.size)
    for start in range(0, grid.size, step):
        yield slice(start, min(start + step, grid.size))


def apply_operator_batch(sigma: Symbol, F: np.ndarray) -> np.ndarray:
    """Apply ``T_sigma`` to a stack of sample arrays of shape ``(B,) + grid.shape``."""
    grid = sigma.grid
    F = np.asarray(F, dtype=complex)
    B = F.shape[0]
    spec = sfft.fftn(F, axes=tuple(range(1, grid.n + 1))).reshape(B, -1) / grid.size
    S = sigma.matrix()
    out = np.empty((grid.size, B), dtype=complex)
    for rows in _row_chunks(grid):
        out[rows] = (S[rows] * _phase_rows(grid, rows)) @ spec.T
    if not np.all(np.isfinite(out)):
        raise ValueError("non-finite operator output")
    return out.T.reshape((B,) + grid.shape)


def apply_operator(sigma: Symbol, f: PeriodicFunction) -> PeriodicFunction:
    """Evaluate the truncated quantization sum at every grid point."""
    _check_grid(sigma, f.grid)
    return PeriodicFunction(f.grid, apply_operator_batch(sigma, f.samples[None])[0])


def _check_cap(entries: int, cap: int | None):
    cap = KERNEL_ENTRY_CAP if cap is None else cap
    if entries > cap:
        raise MemoryError(f"dense object needs {entries} entries, above the cap of {cap}")


def operator_matrix(sigma: Symbol, cap: int | None = None) -> np.ndarray:
    """Dense ``(N^n, N^n)`` matrix of ``T_sigma`` acting on grid samples."""
    grid = sigma.grid
    _check_cap(grid.size**2, cap)
    S = sigma.matrix()
    T = np.empty((grid.size, grid.size), dtype=complex)
    wshape = grid.window().shape
    axes = tuple(range(1, grid.n + 1))
    for rows in _row_chunks(grid):
        A = (S[rows] * _phase_rows(grid, rows)).reshape((-1,) + wshape)
        T[rows] = sfft.fftn(A, axes=axes).reshape(A.shape[0], -1) / grid.size
    return T


def bessel_potential(s: float, f: PeriodicFunction) -> PeriodicFunction:
    """``J^s f``: multiply the spectrum by ``<xi>^s``."""
    if s == 0:
        return f
    c = forward_dft(f)
    mult = bracket(c.window.frequencies()) ** s
    return inverse_dft(SpectralCoefficients(c.window, c.coeffs * mult), f.grid)


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True, eq=False)
class KernelSlice:
    """``K_k(y, u) = sum_xi sigma_k(y, xi) e^{2 pi i u.xi}`` on grid pairs ``(y, u)``."""

    grid: TorusGrid
    k: int
    values: np.ndarray = field(repr=False)
    rho: float = 1.0

    def off_shell_fraction(self) -> float:
        """Relative spectral mass of ``K(y, .)`` outside ``2^{k-1} <= |xi| <= 2^{k+1}``."""
        n = self.grid.n
        spec = sfft.ifftn(self.values, axes=tuple(range(n, 2 * n)))
        r = self.grid.window().norms()
        lo = 0.0 if self.k == 0 else 2.0 ** (self.k - 1)
        hi = 2.0 if self.k == 0 else 2.0 ** (self.k + 1)
        off = (r < lo) | (r > hi)
        total = np.sum(np.abs(spec) ** 2)
        if total == 0:
            return 0.0
        return float(np.sum(np.abs(spec[..., off]) ** 2) / total)


def synthesize_kernel(sigma_k: Symbol, k: int = 0, rho: float | None = None,
                      cap: int | None = None) -> KernelSlice:
    """One inverse transform in ``xi`` per ``y``."""
    grid = sigma_k.grid
    _check_cap(grid.size**2, cap)
    if rho is None:
        rho = sigma_k.claimed_class.rho if sigma_k.claimed_class is not None else 1.0
    axes = tuple(range(grid.n, 2 * grid.n))
    K = sfft.ifftn(sigma_k.values, axes=axes) * grid.size
    return KernelSlice(grid, k, K, float(rho))


def apply_kernel(K: KernelSlice, f: PeriodicFunction) -> PeriodicFunction:
    """``N^{-n} sum_u K(x, x - u) f(u)``: the operator through its kernel."""
    grid = K.grid
    n, N = grid.n, grid.N
    J = grid.indices().reshape(-1, n)
    diff = (J[:, None, :] - J[None, :, :]) % N
    flat = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), grid.shape)
    Kmat = K.values.reshape(grid.size, grid.size)
    rows = np.take_along_axis(Kmat, flat, axis=1)
    out = rows @ f.samples.reshape(-1) / grid.size
    return PeriodicFunction(grid, out)


def periodic_distance(grid: TorusGrid) -> np.ndarray:
    """Torus distance from each grid point to 0 (Euclidean in the wrapped coordinates)."""
    u = grid.points()
    w = np.minimum(u, 1.0 - u)
    return np.sqrt(np.sum(w * w, axis=-1))


def _spectral_gradient(values: np.ndarray, grid: TorusGrid, first_axis: int) -> np.ndarray:
    """Euclidean length of the spectral gradient along axes ``first_axis .. first_axis+n-1``."""
    n = grid.n
    axes = tuple(range(first_axis, first_axis + n))
    spec = sfft.fftn(values, axes=axes)
    eta = grid.window().axis_frequencies()
    sq = np.zeros(values.shape)
    for j in range(n):
        shape = [1] * values.ndim
        shape[first_axis + j] = grid.N
        d = sfft.ifftn(spec * (2j * np.pi * eta).reshape(shape), axes=axes)
        sq += np.abs(d) ** 2
    return np.sqrt(sq)


def weighted_kernel_norm(K: KernelSlice, N_exp: float, r: float, mode: str = "plain") -> np.ndarray:
    """Per-``y`` values of ``|| (1 + 2^{k rho}|u|)^N_exp G(y, u) ||_{L^{r'}_u}``.

    ``G`` is ``K``, ``|grad_y K|`` or ``|grad_u K|`` by ``mode``; ``r' = r/(r-1)``
    and ``r = 1`` gives the sup norm.
    """
    if not (1.0 <= r <= 2.0):
        raise ValueError(f"r must lie in [1, 2], got {r}")
    grid = K.grid
    n = grid.n
    if mode == "plain":
        G = np.abs(K.values)
    elif mode == "grad_y":
        G = _spectral_gradient(K.values, grid, 0)
    elif mode == "grad_u":
        G = _spectral_gradient(K.values, grid, n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    weight = (1.0 + 2.0 ** (K.k * K.rho) * periodic_distance(grid)) ** N_exp
    W = G * weight
    u_axes = tuple(range(n, 2 * n))
    if r == 1.0:
        return np.max(W, axis=u_axes)
    rp = r / (r - 1.0)
    return (np.sum(W**rp, axis=u_axes) / grid.size) ** (1.0 / rp)


def adjoint_apply(sigma: Symbol, f: PeriodicFunction, cap: int | None = None) -> PeriodicFunction:
    """Conjugate transpose of the grid matrix of ``T_sigma`` applied to ``f``."""
    _check_grid(sigma, f.grid)
    T = operator_matrix(sigma, cap)
    return PeriodicFunction(f.grid, T.conj().T @ f.samples.reshape(-1))


# ---------------------------------------------------------------------------
# operator norms


def lp_norm_samples(a: np.ndarray, p: float, axes=None) -> np.ndarray:
    """Riemann-sum L^p norm of sample arrays; ``p = inf`` gives the max."""
    a = np.abs(a)
    if np.isinf(p):
        return np.max(a, axis=axes)
    return np.mean(a**p, axis=axes) ** (1.0 / p)


@dataclass(frozen=True)
class OperatorNormEstimate:
    p: float
    q: float
    lower_bound: float
    trials: int
    seed: int
    exact2: float | None = None


def _power_iteration(T: np.ndarray, seed: int, tol: float = 1e-8, max_iter: int = 20000) -> float:
    """Largest singular value of ``T`` from power iteration on ``T* T``.

    The Rayleigh quotient is stopped once its relative step drops below
    ``1e-6 * tol``; its error is quadratic in the vector error, which keeps
    the singular value well inside ``tol``.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(T.shape[1]) + 1j * rng.standard_normal(T.shape[1])
    v /= np.linalg.norm(v)
    TH = T.conj().T
    lam_old = 0.0
    for it in range(max_iter):
        w = TH @ (T @ v)
        lam = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam - lam_old) <= 1e-6 * tol * max(lam, 1e-300):
            break
        lam_old = lam
    else:
        logger.warning("power iteration stopped at max_iter=%d", max_iter)
    return float(np.sqrt(max(lam, 0.0)))


def _refine_pq(T: np.ndarray, f: np.ndarray, p: float, q: float, steps: int) -> float:
    """Nonlinear power method for ``||T||_{p->q}`` started at ``f``; returns the best ratio seen."""
    pp = p / (p - 1.0)
    TH = T.conj().T

    def dual(v, e):
        return np.abs(v) ** (e - 1.0) * np.exp(1j * np.angle(v))

    f = f / lp_norm_samples(f, p)
    best = float(lp_norm_samples(T @ f, q))
    for _ in range(steps):
        h = TH @ dual(T @ f, q)
        nh = lp_norm_samples(h, pp)
        if nh == 0.0:
            break
        f = dual(h, pp)
        f = f / lp_norm_samples(f, p)
        best = max(best, float(lp_norm_samples(T @ f, q)))
    return best


def operator_norm_estimate(sigma: Symbol, p: float, q: float, trials: int, seed: int,
                           band: float | None = None, refine_steps: int = 0) -> OperatorNormEstimate:
    """Monte Carlo lower bound for ``||T_sigma||_{L^p -> L^q}``.

    Test functions are seeded random trigonometric polynomials normalised in
    ``L^p``.  With ``refine_steps > 0`` each one also seeds a nonlinear power
    iteration ``f <- J_{p'}(T* J_q(T f))`` (``J_e(v) = |v|^{e-1} sgn v``), which
    can only raise the bound.  For ``p = q = 2`` power iteration on ``T* T``
    adds the exact value.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not (1.0 < p <= q < np.inf):
        raise ValueError(f"need 1 < p <= q < inf, got p={p}, q={q}")
    grid = sigma.grid
    axes = tuple(range(1, grid.n + 1))
    F = np.stack([random_trig_polynomial(grid, seed, t, band).samples for t in range(trials)])
    F = F / lp_norm_samples(F, p, axes).reshape((-1,) + (1,) * grid.n)
    TF = apply_operator_batch(sigma, F)
    lower = float(np.max(lp_norm_samples(TF, q, axes)))
    T = None
    if refine_steps > 0:
        T = operator_matrix(sigma)
        for f in F:
            lower = max(lower, _refine_pq(T, f.reshape(-1), p, q, refine_steps))
    exact2 = None
    if p == 2 and q == 2:
        exact2 = _power_iteration(operator_matrix(sigma) if T is None else T, seed)
    return OperatorNormEstimate(p, q, lower, trials, seed, exact2)
