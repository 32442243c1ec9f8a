"""Binary dumps with JSON sidecars.

Data files hold little-endian IEEE-754 float64 values in row-major order,
complex arrays with interleaved real and imaginary parts.  The sidecar
``<path>.json`` records ``kind``, ``n``, ``N`` and kind-specific metadata.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .maximal import CubeFamily, MaximalProfile
from .quantize import KernelSlice
from .symbols import Symbol, symbol_from_params
from .torus_core import PeriodicFunction, SpectralCoefficients, TorusGrid

__all__ = ["dump", "load", "sidecar_path"]

_LE_F8 = np.dtype("<f8")


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def _write(path, data: np.ndarray, header: dict, is_complex: bool = True):
    path = Path(path)
    a = np.ascontiguousarray(data)
    if is_complex:
        raw = a.astype(np.complex128).view(np.float64)
    else:
        raw = np.asarray(a, dtype=np.float64)
    path.write_bytes(raw.astype(_LE_F8).tobytes())
    header = {**header, "dtype": "<f8", "complex": bool(is_complex), "shape": list(a.shape)}
    sidecar_path(path).write_text(json.dumps(header, indent=1))


def dump(obj, path) -> dict:
    """Write ``obj`` to ``path`` plus its sidecar; returns the header."""
    if isinstance(obj, PeriodicFunction):
        header = {"kind": "function", "n": obj.grid.n, "N": obj.grid.N}
        _write(path, obj.samples, header)
    elif isinstance(obj, SpectralCoefficients):
        header = {"kind": "spectrum", "n": obj.window.n, "N": obj.window.N}
        _write(path, obj.coeffs, header)
    elif isinstance(obj, Symbol):
        header = {"kind": "symbol", "n": obj.n, "N": obj.N, "axes": ["x", "xi"]}
        if obj.params is not None:
            header["params"] = obj.params
        if obj.claimed_class is not None:
            c = obj.claimed_class
            header["claimed_class"] = {"m": c.m, "rho": c.rho, "delta": c.delta}
        _write(path, obj.values, header)
    elif isinstance(obj, KernelSlice):
        header = {"kind": "kernel", "n": obj.grid.n, "N": obj.grid.N, "axes": ["y", "u"],
                  "k": obj.k, "rho": obj.rho}
        _write(path, obj.values, header)
    elif isinstance(obj, MaximalProfile):
        header = {"kind": "maximal", "n": obj.values.grid.n, "N": obj.values.grid.N, "r": obj.r,
                  "family": "dyadic", "operator": obj.kind}
        _write(path, obj.array, header, is_complex=False)
    else:
        raise TypeError(f"cannot dump object of type {type(obj).__name__}")
    return json.loads(sidecar_path(path).read_text())


def load(path):
    """Inverse of :func:`dump`."""
    path = Path(path)
    header = json.loads(sidecar_path(path).read_text())
    raw = np.frombuffer(path.read_bytes(), dtype=_LE_F8).astype(np.float64)
    shape = tuple(header["shape"])
    data = raw.view(np.complex128).reshape(shape) if header.get("complex", True) else raw.reshape(shape)
    kind = header["kind"]
    grid = TorusGrid(header["n"], header["N"])
    if kind == "function":
        return PeriodicFunction(grid, data)
    if kind == "spectrum":
        return SpectralCoefficients(grid.window(), data)
    if kind == "symbol":
        if "params" in header:
            sigma = symbol_from_params(grid, header["params"])
            if np.array_equal(sigma.values, data):
                return sigma
        return Symbol.from_array(grid, data)
    if kind == "kernel":
        return KernelSlice(grid, header["k"], data, header["rho"])
    if kind == "maximal":
        return MaximalProfile(PeriodicFunction(grid, data), header["r"], CubeFamily(grid),
                              header.get("operator", "hardy_littlewood"))
    raise ValueError(f"unknown dump kind {kind!r}")
