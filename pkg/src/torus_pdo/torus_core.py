"""Uniform grids on the torus T^n, the truncated frequency lattice and the
discrete Fourier pair between them.

Arrays are stored with shape ``(N,) * n``.  Spectral arrays use the FFT
ordering, so index ``j`` along an axis holds the frequency ``j`` for
``j < N/2`` and ``j - N`` otherwise; this is exactly the symmetric window
``[-N/2, N/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft

__all__ = [
    "TorusGrid",
    "LatticeWindow",
    "PeriodicFunction",
    "SpectralCoefficients",
    "forward_dft",
    "inverse_dft",
    "bracket",
    "trig_polynomial",
    "trial_rng",
    "random_trig_polynomial",
]


def _is_power_of_two(N: int) -> bool:
    return N >= 1 and (N & (N - 1)) == 0


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid ``x = j/N`` on T^n, ``j`` in ``{0, ..., N-1}^n``."""

    n: int
    N: int

    def __post_init__(self):
        if not (1 <= self.n <= 3):
            raise ValueError(f"dimension n must be in 1..3, got {self.n}")
        if not _is_power_of_two(self.N) or self.N < 8:
            raise ValueError(f"N must be a power of two >= 8, got {self.N}")

    @property
    def spacing(self) -> float:
        return 1.0 / self.N

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @property
    def levels(self) -> int:
        """log2(N)."""
        return self.N.bit_length() - 1

    def indices(self) -> np.ndarray:
        """Integer multi-indices, shape ``shape + (n,)``."""
        axes = np.meshgrid(*([np.arange(self.N)] * self.n), indexing="ij")
        return np.stack(axes, axis=-1)

    def points(self) -> np.ndarray:
        """Grid coordinates in [0, 1)^n, shape ``shape + (n,)``."""
        return self.indices() / self.N

    def window(self) -> "LatticeWindow":
        return LatticeWindow(self.n, self.N)


@dataclass(frozen=True)
class LatticeWindow:
    """The box of lattice frequencies ``[-N/2, N/2)^n`` in FFT order."""

    n: int
    N: int

    @property
    def half(self) -> int:
        return self.N // 2

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    def axis_frequencies(self) -> np.ndarray:
        return np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(np.int64)

    def frequencies(self) -> np.ndarray:
        """Integer frequencies, shape ``shape + (n,)``."""
        axes = np.meshgrid(*([self.axis_frequencies()] * self.n), indexing="ij")
        return np.stack(axes, axis=-1)

    def norms(self) -> np.ndarray:
        """Euclidean length ``|xi|`` on the window."""
        return np.sqrt(np.sum(self.frequencies().astype(float) ** 2, axis=-1))

    def contains(self, xi) -> bool:
        xi = np.atleast_1d(np.asarray(xi))
        return xi.shape == (self.n,) and bool(np.all((xi >= -self.half) & (xi < self.half)))

    def index_of(self, xi) -> tuple:
        """Array index of lattice point ``xi`` in FFT order."""
        xi = np.atleast_1d(np.asarray(xi, dtype=np.int64))
        if not self.contains(xi):
            raise ValueError(f"frequency {tuple(xi)} is outside the window [-{self.half}, {self.half})^{self.n}")
        return tuple(int(v) % self.N for v in xi)


def _check_finite(a: np.ndarray, what: str):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite values")


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """Complex samples of a 1-periodic function on a :class:`TorusGrid`."""

    grid: TorusGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=complex)
        if a.size != self.grid.size:
            raise ValueError(f"expected {self.grid.size} samples, got {a.size}")
        a = a.reshape(self.grid.shape)
        _check_finite(a, "samples")
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @classmethod
    def from_callable(cls, grid: TorusGrid, func) -> "PeriodicFunction":
        """Sample ``func(x)`` where ``x`` has shape ``grid.shape + (n,)``."""
        return cls(grid, func(grid.points()))

    def __add__(self, other):
        return PeriodicFunction(self.grid, self.samples + other.samples)

    def __sub__(self, other):
        return PeriodicFunction(self.grid, self.samples - other.samples)

    def __mul__(self, c):
        if isinstance(c, PeriodicFunction):
            return PeriodicFunction(self.grid, self.samples * c.samples)
        return PeriodicFunction(self.grid, self.samples * c)

    __rmul__ = __mul__

    @cached_property
    def real(self) -> np.ndarray:
        return self.samples.real


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Fourier coefficients on a :class:`LatticeWindow` (FFT order)."""

    window: LatticeWindow
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=complex)
        if a.size != self.window.size:
            raise ValueError(f"expected {self.window.size} coefficients, got {a.size}")
        a = a.reshape(self.window.shape)
        _check_finite(a, "coefficients")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    def __getitem__(self, xi) -> complex:
        return complex(self.coeffs[self.window.index_of(xi)])

    @classmethod
    def from_dict(cls, window: LatticeWindow, values: dict) -> "SpectralCoefficients":
        c = np.zeros(window.shape, dtype=complex)
        for xi, v in values.items():
            c[window.index_of(xi)] = v
        return cls(window, c)


def forward_dft(f: PeriodicFunction) -> SpectralCoefficients:
    """Riemann-sum Fourier coefficients ``N^{-n} sum_j f(j/N) e^{-2 pi i j.xi/N}``."""
    N, n = f.grid.N, f.grid.n
    c = sfft.fftn(f.samples) / N**n
    return SpectralCoefficients(f.grid.window(), c)


def inverse_dft(c: SpectralCoefficients, grid: TorusGrid | None = None) -> PeriodicFunction:
    """Evaluate ``sum_xi c(xi) e^{2 pi i x.xi}`` at the grid points."""
    win = c.window
    if grid is None:
        grid = TorusGrid(win.n, win.N)
    elif (grid.n, grid.N) != (win.n, win.N):
        raise ValueError(f"grid (n={grid.n}, N={grid.N}) does not match window (n={win.n}, N={win.N})")
    return PeriodicFunction(grid, sfft.ifftn(c.coeffs) * win.N**win.n)


def bracket(xi) -> np.ndarray | float:
    """Japanese bracket ``(1 + |xi|^2)^{1/2}``; the last axis holds the components.

    Scalars are treated as one-dimensional lattice points.
    """
    a = np.asarray(xi, dtype=float)
    if a.ndim == 0:
        return float(np.sqrt(1.0 + a * a))
    return np.sqrt(1.0 + np.sum(a * a, axis=-1))


def trig_polynomial(grid: TorusGrid, coeffs: dict) -> PeriodicFunction:
    """Trigonometric polynomial ``sum c_xi e^{2 pi i x.xi}`` from a ``{xi: c}`` map."""
    return inverse_dft(SpectralCoefficients.from_dict(grid.window(), coeffs), grid)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, trial)``."""
    ss = np.random.SeedSequence([int(seed), int(trial)])
    return np.random.Generator(np.random.Philox(ss))


def random_trig_polynomial(grid: TorusGrid, seed: int, trial: int, band: float | None = None) -> PeriodicFunction:
    """Trigonometric polynomial with i.i.d. complex Gaussian coefficients on ``|xi| <= band``.

    ``band`` defaults to ``N/4``.  The draw depends only on ``(seed, trial)``
    and the set of frequencies, never on call order.
    """
    win = grid.window()
    band = grid.N / 4 if band is None else band
    mask = win.norms() <= band
    rng = trial_rng(seed, trial)
    z = rng.standard_normal(win.shape) + 1j * rng.standard_normal(win.shape)
    c = np.where(mask, z / np.sqrt(2.0), 0.0)
    return inverse_dft(SpectralCoefficients(win, c), grid)
