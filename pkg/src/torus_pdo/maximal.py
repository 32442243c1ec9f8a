"""Maximal operators over periodic cubes, Muckenhoupt constants, weighted norms.

Cubes have dyadic side lengths ``2^-j`` (``L = N 2^-j`` grid cells,
``j = 0..log2 N``) and every grid point as a corner, wrapping around the
torus.  A point ``x`` lies in the cubes whose first cell ``s`` satisfies
``x - L < s <= x`` componentwise, so the sup over cubes containing ``x`` is a
backward sliding maximum of the cube averages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import maximum_filter1d

from .torus_core import PeriodicFunction, TorusGrid

__all__ = [
    "CubeFamily",
    "Cube",
    "Weight",
    "MaximalProfile",
    "hardy_littlewood",
    "sharp_maximal",
    "muckenhoupt_constant",
    "weighted_lp_norm",
    "cube_means",
]

_CHUNK_ENTRIES = 2**22


@dataclass(frozen=True)
class CubeFamily:
    """Dyadic side lengths times all grid corners on a :class:`TorusGrid`."""

    grid: TorusGrid

    @property
    def side_cells(self) -> list:
        return [self.grid.N >> j for j in range(self.grid.levels + 1)][::-1]

    @property
    def side_lengths(self) -> list:
        return [L / self.grid.N for L in self.side_cells]

    def __len__(self):
        return len(self.side_cells) * self.grid.size


@dataclass(frozen=True)
class Cube:
    """Periodic cube ``prod_j [start_j, start_j + cells) / N``."""

    grid: TorusGrid
    start: tuple
    cells: int

    @classmethod
    def centered(cls, grid: TorusGrid, center: tuple, cells: int) -> "Cube":
        start = tuple((c - cells // 2) % grid.N for c in center)
        return cls(grid, start, cells)

    @property
    def side(self) -> float:
        return self.cells / self.grid.N

    @property
    def center_index(self) -> tuple:
        return tuple((s + self.cells // 2) % self.grid.N for s in self.start)

    def dilate(self, cells: int) -> "Cube":
        """Concentric cube with ``cells`` cells per side (at most the whole torus)."""
        cells = int(min(max(cells, 1), self.grid.N))
        return Cube.centered(self.grid, self.center_index, cells)

    def mask(self) -> np.ndarray:
        g = self.grid
        m = np.ones(g.shape, dtype=bool)
        for j, s in enumerate(self.start):
            axis = np.zeros(g.N, dtype=bool)
            axis[(s + np.arange(self.cells)) % g.N] = True
            shape = [1] * g.n
            shape[j] = g.N
            m = m & axis.reshape(shape)
        return m


@dataclass(frozen=True, eq=False)
class Weight:
    """Strictly positive real weight sampled on a grid."""

    w: PeriodicFunction

    def __post_init__(self):
        s = self.w.samples
        if np.any(s.imag != 0) or not np.all(s.real > 0):
            raise ValueError("weight must be real and strictly positive")

    @classmethod
    def from_callable(cls, grid: TorusGrid, func) -> "Weight":
        return cls(PeriodicFunction.from_callable(grid, func))

    @property
    def values(self) -> np.ndarray:
        return self.w.samples.real


@dataclass(frozen=True, eq=False)
class MaximalProfile:
    values: PeriodicFunction = field(repr=False)
    r: float
    family: CubeFamily
    kind: str = "hardy_littlewood"

    @property
    def array(self) -> np.ndarray:
        return self.values.samples.real


def _window_sums_axis(a: np.ndarray, L: int, axis: int) -> np.ndarray:
    """Periodic sums over ``[s, s+L)`` along ``axis`` via duplicate-extended prefix sums."""
    N = a.shape[axis]
    ext = np.concatenate([a, a], axis=axis)
    cs = np.cumsum(ext, axis=axis)
    zero_shape = list(a.shape)
    zero_shape[axis] = 1
    cs = np.concatenate([np.zeros(zero_shape, dtype=cs.dtype), cs], axis=axis)
    hi = np.take(cs, np.arange(L, L + N), axis=axis)
    lo = np.take(cs, np.arange(N), axis=axis)
    return hi - lo


def cube_means(a: np.ndarray, L: int, n: int) -> np.ndarray:
    """Average of ``a`` over the cube of ``L`` cells starting at every grid point.

    The last ``n`` axes of ``a`` are the grid axes.
    """
    if L == 1:
        return np.array(a, dtype=float)
    out = a
    for ax in range(a.ndim - n, a.ndim):
        out = _window_sums_axis(out, L, ax)
    return out / float(L) ** n


def _backward_max(A: np.ndarray, L: int, n: int) -> np.ndarray:
    """``max_{x-L < s <= x} A(s)`` componentwise, periodic."""
    if L == 1:
        return A
    out = A
    for ax in range(A.ndim - n, A.ndim):
        out = maximum_filter1d(out, size=L, axis=ax, mode="wrap", origin=(L - 1) // 2)
    return out


def _check_r(r: float, lo: float, hi: float):
    if not (lo <= r <= hi):
        raise ValueError(f"r must lie in [{lo}, {hi}], got {r}")


def _hl_array(a: np.ndarray, r: float, n: int, sides) -> np.ndarray:
    powered = np.abs(a) ** r
    best = np.zeros(powered.shape)
    for L in sides:
        best = np.maximum(best, _backward_max(cube_means(powered, L, n), L, n))
    return best ** (1.0 / r)


def hardy_littlewood(f: PeriodicFunction, r: float, fam: CubeFamily | None = None) -> MaximalProfile:
    """``M_r f(x)``: largest cube average of ``|f|^r`` (to the power 1/r) over cubes containing x."""
    _check_r(r, 1.0, np.inf)
    fam = fam or CubeFamily(f.grid)
    vals = _hl_array(f.samples, r, f.grid.n, fam.side_cells)
    return MaximalProfile(PeriodicFunction(f.grid, vals), r, fam, "hardy_littlewood")


def _cube_oscillations(f: np.ndarray, L: int, r: float) -> np.ndarray:
    """Average of ``|f - mean_Q f|^r`` over every cube with ``L`` cells per side."""
    n = f.ndim
    N = f.shape[0]
    if L == N:
        c = f.mean()
        return np.full(f.shape, np.mean(np.abs(f - c) ** r))
    ext = np.pad(f, [(0, L - 1)] * n, mode="wrap")
    win = sliding_window_view(ext, (L,) * n)[(slice(0, N),) * n]
    out = np.empty(f.shape)
    rows = max(1, _CHUNK_ENTRIES // (L**n * N ** (n - 1)))
    last = tuple(range(n, 2 * n))
    for i in range(0, N, rows):
        w = win[i:i + rows]
        c = w.mean(axis=last, keepdims=True)
        out[i:i + rows] = np.mean(np.abs(w - c) ** r, axis=last)
    return out


def _sharp_array(f: np.ndarray, r: float, sides) -> np.ndarray:
    n = f.ndim
    best = np.zeros(f.shape)
    for L in sides:
        if L == 1:
            continue  # single cells have zero oscillation
        best = np.maximum(best, _backward_max(_cube_oscillations(f, L, r), L, n))
    return best ** (1.0 / r)


def sharp_maximal(f: PeriodicFunction, r: float, fam: CubeFamily | None = None) -> MaximalProfile:
    """``M^#_r f`` with ``c_Q`` the cube mean.

    The mean is within a factor 2 of the optimal constant, so the result lies
    between the true sharp maximal function and twice it.
    """
    _check_r(r, 1.0, 2.0)
    fam = fam or CubeFamily(f.grid)
    vals = _sharp_array(f.samples, r, fam.side_cells)
    return MaximalProfile(PeriodicFunction(f.grid, vals), r, fam, "sharp")


def muckenhoupt_constant(w: Weight, p: float, fam: CubeFamily | None = None) -> float:
    """``sup_Q (avg_Q w)(avg_Q w^{-1/(p-1)})^{p-1}`` over the cube family."""
    if not isinstance(w, Weight):
        w = Weight(w)
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    grid = w.w.grid
    fam = fam or CubeFamily(grid)
    a = w.values
    b = a ** (-1.0 / (p - 1.0))
    best = 0.0
    for L in fam.side_cells:
        val = cube_means(a, L, grid.n) * cube_means(b, L, grid.n) ** (p - 1.0)
        best = max(best, float(val.max()))
    return best


def weighted_lp_norm(f: PeriodicFunction, w: Weight, p: float) -> float:
    """``(N^{-n} sum |f|^p w)^{1/p}``."""
    if not isinstance(w, Weight):
        w = Weight(w)
    if not (1.0 <= p < np.inf):
        raise ValueError(f"p must lie in [1, inf), got {p}")
    return float(np.mean(np.abs(f.samples) ** p * w.values) ** (1.0 / p))
