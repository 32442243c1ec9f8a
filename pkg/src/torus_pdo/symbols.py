"""Discrete symbols sigma(x, xi) on T^n x Z^n and their difference calculus.

A :class:`Symbol` holds its values on ``grid x window`` as an array of shape
``grid.shape + window.shape``.  Symbols built from a closed form also keep a
*generator*, a callable ``gen(xi)`` that evaluates the symbol at every grid
point ``x`` for arbitrary integer frequencies ``xi`` (shape ``(..., n)``),
returning an array of shape ``grid.shape + xi.shape[:-1]``.  Differences of
generator-backed symbols are therefore exact everywhere on the window; for
plain array data the outer layers that would need frequencies beyond the
window are marked invalid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .torus_core import LatticeWindow, TorusGrid, bracket

__all__ = [
    "SymbolClass",
    "Symbol",
    "SeminormTable",
    "ClassFit",
    "DyadicPartition",
    "difference_op",
    "x_derivative",
    "seminorms",
    "fit_symbol_class",
    "make_bessel_symbol",
    "make_oscillating_symbol",
    "make_multiplier_symbol",
    "symbol_from_params",
    "smooth_step",
    "phi_hat",
    "psi_hat",
    "dyadic_partition",
    "littlewood_paley_split",
    "multi_indices",
]

Generator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SymbolClass:
    m: float
    rho: float
    delta: float

    def __post_init__(self):
        if not (0.0 < self.rho <= 1.0):
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")


@dataclass(frozen=True, eq=False)
class Symbol:
    """Values of sigma(x, xi) over (grid point, window frequency)."""

    grid: TorusGrid
    window: LatticeWindow
    values: np.ndarray = field(repr=False)
    claimed_class: SymbolClass | None = None
    generator: Generator | None = field(default=None, repr=False)
    params: dict | None = None
    valid: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.grid.n, self.grid.N) != (self.window.n, self.window.N):
            raise ValueError("grid and window sizes differ")
        v = np.asarray(self.values, dtype=complex).reshape(self.grid.shape + self.window.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol values contain non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.valid is not None:
            mask = np.asarray(self.valid, dtype=bool).reshape(self.window.shape)
            mask.setflags(write=False)
            object.__setattr__(self, "valid", mask)

    @classmethod
    def from_generator(cls, grid, gen, claimed_class=None, params=None) -> "Symbol":
        window = grid.window()
        return cls(grid, window, gen(window.frequencies()), claimed_class, gen, params)

    @classmethod
    def from_array(cls, grid, values, claimed_class=None) -> "Symbol":
        return cls(grid, grid.window(), values, claimed_class)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def N(self) -> int:
        return self.grid.N

    @property
    def valid_mask(self) -> np.ndarray:
        if self.valid is None:
            return np.ones(self.window.shape, dtype=bool)
        return self.valid

    def is_x_independent(self, tol: float = 0.0) -> bool:
        ref = self.values[(0,) * self.n]
        return bool(np.max(np.abs(self.values - ref), initial=0.0) <= tol)

    def matrix(self) -> np.ndarray:
        """Values as an ``(N^n, N^n)`` array, rows indexed by x, columns by xi."""
        return self.values.reshape(self.grid.size, self.window.size)

    def _combine(self, other: "Symbol", op) -> "Symbol":
        if (self.grid != other.grid):
            raise ValueError("symbols live on different grids")
        gen = None
        if self.generator is not None and other.generator is not None:
            g1, g2 = self.generator, other.generator
            gen = lambda xi: op(g1(xi), g2(xi))  # noqa: E731
        valid = None
        if self.valid is not None or other.valid is not None:
            valid = self.valid_mask & other.valid_mask
        return Symbol(self.grid, self.window, op(self.values, other.values), None, gen, None, valid)

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def scale(self, c: complex) -> "Symbol":
        gen = None
        if self.generator is not None:
            g = self.generator
            gen = lambda xi: c * g(xi)  # noqa: E731
        return Symbol(self.grid, self.window, c * self.values, self.claimed_class, gen, None, self.valid)


def multi_indices(n: int, order: int):
    """All multi-indices in N_0^n with total order <= ``order``, graded."""
    out = []
    for total in range(order + 1):
        for a in itertools.product(range(total + 1), repeat=n):
            if sum(a) == total:
                out.append(tuple(a))
    return out


def _as_multi_index(a, n: int) -> tuple:
    if np.isscalar(a):
        a = (int(a),) + (0,) * (n - 1)
    a = tuple(int(v) for v in a)
    if len(a) != n or min(a) < 0:
        raise ValueError(f"invalid multi-index {a} for dimension {n}")
    return a


# ---------------------------------------------------------------------------
# difference and derivative operators


def _forward_difference_gen(gen: Generator, axis: int, n: int) -> Generator:
    shift = np.zeros(n, dtype=np.int64)
    shift[axis] = 1

    def diff(xi):
        return gen(xi + shift) - gen(xi)

    return diff


def difference_op(sigma: Symbol, alpha) -> Symbol:
    """Iterated forward differences ``Delta^alpha_xi sigma``."""
    n = sigma.n
    alpha = _as_multi_index(alpha, n)
    if sum(alpha) > 4:
        raise ValueError(f"difference order {sum(alpha)} exceeds 4")
    if sum(alpha) == 0:
        return sigma

    if sigma.generator is not None:
        gen = sigma.generator
        for axis, a in enumerate(alpha):
            for _ in range(a):
                gen = _forward_difference_gen(gen, axis, n)
        return Symbol.from_generator(sigma.grid, gen, None, None)

    values = np.array(sigma.values)
    valid = np.array(sigma.valid_mask)
    freqs = sigma.window.frequencies()
    top = sigma.window.half - 1
    for axis, a in enumerate(alpha):
        xi_axis = n + axis
        for _ in range(a):
            values = np.roll(values, -1, axis=xi_axis) - values
            valid = valid & np.roll(valid, -1, axis=axis) & (freqs[..., axis] != top)
    if not valid.any():
        raise ValueError("difference order consumes the whole window")
    values = np.where(valid, values, 0.0)
    return Symbol(sigma.grid, sigma.window, values, None, None, None, valid)


def _spectral_x_derivative(values: np.ndarray, grid: TorusGrid, beta: tuple) -> np.ndarray:
    n = grid.n
    axes = tuple(range(n))
    spec = sfft.fftn(values, axes=axes)
    eta = grid.window().axis_frequencies()
    for j, b in enumerate(beta):
        if b:
            shape = [1] * values.ndim
            shape[j] = grid.N
            spec = spec * ((2j * np.pi * eta) ** b).reshape(shape)
    out = sfft.ifftn(spec, axes=axes)
    if not np.all(np.isfinite(out)):
        raise ValueError("non-finite values in x-derivative")
    return out


def x_derivative(sigma: Symbol, beta) -> Symbol:
    """Spectral derivative ``d^beta_x sigma`` for each fixed frequency."""
    n = sigma.n
    beta = _as_multi_index(beta, n)
    if sum(beta) > 4:
        raise ValueError(f"derivative order {sum(beta)} exceeds 4")
    if sum(beta) == 0:
        return sigma
    grid = sigma.grid
    gen = None
    if sigma.generator is not None:
        g = sigma.generator

        def gen(xi):
            return _spectral_x_derivative(g(xi), grid, beta)

    values = _spectral_x_derivative(sigma.values, grid, beta)
    if sigma.valid is not None:
        values = np.where(sigma.valid, values, 0.0)
    return Symbol(grid, sigma.window, values, None, gen, None, sigma.valid)


# ---------------------------------------------------------------------------
# seminorms and class fit


def shell_index(window: LatticeWindow) -> np.ndarray:
    """Shell ``s`` with ``<xi>`` in ``[2^s, 2^{s+1})`` for every window frequency."""
    b = bracket(window.frequencies())
    return np.floor(np.log2(b) + 1e-12).astype(int)


@dataclass
class SeminormTable:
    """Shell-wise sups ``sup |d^beta_x Delta^alpha_xi sigma|`` keyed by (alpha, beta, s)."""

    n: int
    N: int
    entries: dict
    shells: list

    def series(self, alpha, beta):
        alpha = _as_multi_index(alpha, self.n)
        beta = _as_multi_index(beta, self.n)
        s = [t for t in self.shells if (alpha, beta, t) in self.entries]
        return np.array(s), np.array([self.entries[(alpha, beta, t)] for t in s])


def seminorms(sigma: Symbol, alpha_max: int, beta_max: int) -> SeminormTable:
    if alpha_max > 3 or beta_max > 3:
        raise ValueError("alpha_max and beta_max must be at most 3")
    n = sigma.n
    shells_of = shell_index(sigma.window)
    shells = sorted(int(s) for s in np.unique(shells_of))
    x_axes = tuple(range(n))
    entries = {}
    for alpha in multi_indices(n, alpha_max):
        d_alpha = difference_op(sigma, alpha)
        for beta in multi_indices(n, beta_max):
            d = x_derivative(d_alpha, beta)
            sup_x = np.max(np.abs(d.values), axis=x_axes)
            mask = d.valid_mask
            for s in shells:
                sel = mask & (shells_of == s)
                if sel.any():
                    entries[(alpha, beta, s)] = float(sup_x[sel].max())
    return SeminormTable(n, sigma.N, entries, shells)


@dataclass(frozen=True)
class ClassFit:
    m_hat: float
    rho_hat: float
    delta_hat: float
    residual: float
    degenerate: bool = False
    notes: tuple = ()


def _line_fit(s, y):
    slope, icpt = np.polyfit(s, y, 1)
    return float(slope), float(np.max(np.abs(y - (slope * s + icpt))))


_NEGLIGIBLE = 1e-10


def fit_symbol_class(table: SeminormTable) -> ClassFit:
    """Least-squares inversion of the class inequality on the mid shells.

    Only shells with ``2 <= 2^s <= N/4`` enter the regression.  A derivative
    table that vanishes to rounding (relative size below 1e-10) carries no
    decay information; the fit then reports the extreme admissible value,
    ``rho_hat = 1`` or ``delta_hat = 0``, and says so in ``notes``.
    """
    if len(table.shells) < 4:
        raise ValueError(f"need at least 4 shells, table has {len(table.shells)}")
    n = table.n
    zero = (0,) * n
    e1 = (1,) + (0,) * (n - 1)
    lo, hi = 1, table.N.bit_length() - 3
    keep = [s for s in table.shells if lo <= s <= hi]
    if len(keep) < 2:
        raise ValueError("fewer than two shells in the regression range")

    def col(alpha, beta):
        return np.array([table.entries.get((alpha, beta, s), np.nan) for s in keep])

    base = col(zero, zero)
    if not np.all(np.isfinite(base)) or np.all(base == 0):
        return ClassFit(-math.inf, math.nan, math.nan, 0.0, degenerate=True, notes=("zero symbol",))
    if np.any(base <= 0):
        raise ValueError("symbol vanishes on some fitted shells; class fit undefined")

    s = np.array(keep, dtype=float)
    m_hat, res = _line_fit(s, np.log2(base))
    notes = []

    dxi = col(e1, zero)
    if np.all(dxi <= _NEGLIGIBLE * base):
        rho_hat = 1.0
        notes.append("xi-differences vanish; rho_hat set to 1")
    else:
        slope, r = _line_fit(s, np.log2(np.maximum(dxi, np.finfo(float).tiny)))
        rho_hat, res = m_hat - slope, max(res, r)

    if (zero, e1, keep[0]) in table.entries:
        dx = col(zero, e1)
        if np.all(dx <= _NEGLIGIBLE * base):
            delta_hat = 0.0
            notes.append("x-derivatives vanish; delta_hat set to 0")
        else:
            slope, r = _line_fit(s, np.log2(np.maximum(dx, np.finfo(float).tiny)))
            delta_hat, res = slope - m_hat, max(res, r)
    else:
        delta_hat = math.nan
        notes.append("no x-derivative entries in table")
    return ClassFit(m_hat, rho_hat, delta_hat, res, False, tuple(notes))


# ---------------------------------------------------------------------------
# built-in symbol families


def _broadcast_over_grid(grid: TorusGrid, vals: np.ndarray) -> np.ndarray:
    return np.broadcast_to(vals, grid.shape + vals.shape)


def make_bessel_symbol(grid: TorusGrid, window: LatticeWindow | None, s: float) -> Symbol:
    """``sigma(x, xi) = <xi>^s``, the symbol of the Bessel potential ``J^s``."""
    s = float(s)

    def gen(xi):
        return _broadcast_over_grid(grid, bracket(xi) ** s)

    return Symbol.from_generator(grid, gen, SymbolClass(s, 1.0, 0.0), {"family": "bessel", "s": s})


def make_multiplier_symbol(grid: TorusGrid, values: dict, default: complex = 1.0) -> Symbol:
    """x-independent symbol equal to ``default`` except at the listed frequencies."""
    window = grid.window()
    table = {tuple(int(v) for v in np.atleast_1d(k)): complex(v) for k, v in values.items()}

    def gen(xi):
        xi = np.asarray(xi)
        out = np.full(xi.shape[:-1], complex(default))
        for k, v in table.items():
            out[np.all(xi == np.array(k), axis=-1)] = v
        return _broadcast_over_grid(grid, out)

    params = {"family": "multiplier", "default": [complex(default).real, complex(default).imag],
              "values": [[list(k), v.real, v.imag] for k, v in table.items()]}
    return Symbol(grid, window, gen(window.frequencies()), None, gen, params)


AMPLITUDE_PROFILES = {
    "constant": lambda x: np.ones(x.shape[:-1]),
    "cosine": lambda x: 1.0 + 0.5 * np.cos(2 * np.pi * x[..., 0]),
}


def make_oscillating_symbol(grid: TorusGrid, window: LatticeWindow | None, m: float, rho: float,
                            delta: float, amplitude_profile=None, seed: int = 0,
                            c1: float | None = None, c2: float | None = None) -> Symbol:
    """Template symbol in S^m_{rho,delta}.

    ``<xi>^m exp(i c1 <xi>^{1-rho}) exp(i c2 sin(2 pi x_1) <xi>^delta)``, with
    ``c1, c2`` drawn uniformly from [1/2, 2] by ``seed`` unless given.  An
    amplitude profile (a name from ``AMPLITUDE_PROFILES`` or a callable of the
    grid points) multiplies the result.
    """
    if not (0.0 < rho <= 1.0 and 0.0 <= delta < 1.0):
        raise ValueError(f"need 0 < rho <= 1 and 0 <= delta < 1, got rho={rho}, delta={delta}")
    if rho + delta > 1.0 + 1e-12:
        raise ValueError(f"template requires rho + delta <= 1, got {rho + delta}")
    rng = np.random.default_rng(seed)
    d1, d2 = rng.uniform(0.5, 2.0, size=2)
    c1 = float(d1 if c1 is None else c1)
    c2 = float(d2 if c2 is None else c2)

    pts = grid.points()
    profile_name = None
    if amplitude_profile is None:
        amp = None
    elif isinstance(amplitude_profile, str):
        profile_name = amplitude_profile
        amp = AMPLITUDE_PROFILES[amplitude_profile](pts)
    else:
        amp = np.asarray(amplitude_profile(pts), dtype=float)
    sin_x = np.sin(2 * np.pi * pts[..., 0])

    def gen(xi):
        b = bracket(xi)
        lead = b**m * np.exp(1j * c1 * b ** (1.0 - rho))
        bd = b**delta
        osc = np.exp(1j * c2 * sin_x.reshape(grid.shape + (1,) * bd.ndim) * bd)
        out = lead * osc
        if amp is not None:
            out = out * amp.reshape(grid.shape + (1,) * bd.ndim)
        return out

    params = None
    if amplitude_profile is None or profile_name is not None:
        params = {"family": "oscillating", "m": float(m), "rho": float(rho), "delta": float(delta),
                  "c1": c1, "c2": c2, "seed": int(seed), "amplitude_profile": profile_name}
    return Symbol.from_generator(grid, gen, SymbolClass(m, rho, delta), params)


def symbol_from_params(grid: TorusGrid, params: dict) -> Symbol:
    """Rebuild a generator-backed symbol from its parameter record."""
    fam = params.get("family")
    if fam == "bessel":
        return make_bessel_symbol(grid, None, params["s"])
    if fam == "oscillating":
        return make_oscillating_symbol(grid, None, params["m"], params["rho"], params["delta"],
                                       params.get("amplitude_profile"), params.get("seed", 0),
                                       params.get("c1"), params.get("c2"))
    if fam == "multiplier":
        d = params.get("default", [1.0, 0.0])
        vals = {tuple(k): complex(re, im) for k, re, im in params.get("values", [])}
        return make_multiplier_symbol(grid, vals, complex(d[0], d[1]))
    raise ValueError(f"unknown symbol family {fam!r}")


# ---------------------------------------------------------------------------
# Littlewood-Paley partition


def smooth_step(t) -> np.ndarray:
    """C-infinity cutoff: 1 for t <= 0, 0 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=float)

    def g(u):
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = np.exp(-1.0 / u[pos])
        return out

    a, b = g(1.0 - t), g(t)
    return a / (a + b)


def phi_hat(radius) -> np.ndarray:
    """Radial bump: 1 on ``|xi| <= 1``, 0 on ``|xi| >= 2``."""
    return smooth_step(np.asarray(radius, dtype=float) - 1.0)


def psi_hat(radius) -> np.ndarray:
    """``phi_hat(xi) - phi_hat(2 xi)``, supported in ``1/2 <= |xi| <= 2``."""
    r = np.asarray(radius, dtype=float)
    return phi_hat(r) - phi_hat(2.0 * r)


@dataclass(frozen=True, eq=False)
class DyadicPartition:
    """``phihat`` and ``psihat[k-1] = psi_hat(2^-k xi)`` for k = 1..K on a window."""

    window: LatticeWindow
    K: int
    phihat: np.ndarray = field(repr=False)
    psihat: tuple = field(repr=False)

    def piece(self, k: int) -> np.ndarray:
        return self.phihat if k == 0 else self.psihat[k - 1]


def dyadic_partition(window: LatticeWindow, K: int) -> DyadicPartition:
    r = window.norms()
    return DyadicPartition(window, K, phi_hat(r), tuple(psi_hat(r / 2.0**k) for k in range(1, K + 1)))


def _check_K(window: LatticeWindow, K: int):
    if K < 0 or 2 ** (K + 1) > window.N // 2:
        raise ValueError(f"K={K} too large for N={window.N}: need 2^(K+1) <= N/2")


def littlewood_paley_split(sigma: Symbol, K: int) -> list:
    """``[sigma_0, ..., sigma_K]`` with ``sigma_0 = sigma phi_hat``, ``sigma_k = sigma psi_hat_k``."""
    _check_K(sigma.window, K)
    part = dyadic_partition(sigma.window, K)
    pieces = []
    for k in range(K + 1):
        mult = part.piece(k)
        gen = None
        if sigma.generator is not None:
            gen = _cutoff_gen(sigma.generator, k)
        values = sigma.values * mult
        pieces.append(Symbol(sigma.grid, sigma.window, values, sigma.claimed_class, gen,
                             None, sigma.valid))
    return pieces


def _cutoff_gen(gen: Generator, k: int) -> Generator:
    def piece(xi):
        r = np.sqrt(np.sum(np.asarray(xi, dtype=float) ** 2, axis=-1))
        mult = phi_hat(r) if k == 0 else psi_hat(r / 2.0**k)
        return gen(xi) * mult

    return piece

