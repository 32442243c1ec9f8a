import json

import numpy as np
import pytest

from torus_pdo.io import dump, load, sidecar_path
from torus_pdo.maximal import MaximalProfile, hardy_littlewood
from torus_pdo.quantize import KernelSlice, synthesize_kernel
from torus_pdo.symbols import Symbol, make_oscillating_symbol
from torus_pdo.torus_core import PeriodicFunction, SpectralCoefficients, TorusGrid, forward_dft, random_trig_polynomial


def test_function_round_trip_and_byte_layout(tmp_path):
    g = TorusGrid(1, 8)
    f = random_trig_polynomial(g, 0, 0)
    path = tmp_path / "f.bin"
    header = dump(f, path)
    assert header["kind"] == "function" and header["n"] == 1 and header["N"] == 8
    assert header["dtype"] == "<f8" and header["complex"] and header["shape"] == [8]
    raw = path.read_bytes()
    assert len(raw) == 8 * 16
    re, im = np.frombuffer(raw[:16], dtype="<f8")
    assert re == f.samples[0].real and im == f.samples[0].imag
    back = load(path)
    assert isinstance(back, PeriodicFunction) and np.array_equal(back.samples, f.samples)


def test_spectrum_round_trip(tmp_path):
    c = forward_dft(random_trig_polynomial(TorusGrid(2, 8), 1, 0))
    dump(c, tmp_path / "c.bin")
    back = load(tmp_path / "c.bin")
    assert isinstance(back, SpectralCoefficients) and np.array_equal(back.coeffs, c.coeffs)


def test_symbol_round_trip_keeps_params(tmp_path):
    sigma = make_oscillating_symbol(TorusGrid(1, 16), None, -0.5, 0.5, 0.5, seed=3)
    header = dump(sigma, tmp_path / "s.bin")
    assert header["axes"] == ["x", "xi"] and header["params"] == sigma.params
    assert header["claimed_class"] == {"m": -0.5, "rho": 0.5, "delta": 0.5}
    back = load(tmp_path / "s.bin")
    assert np.array_equal(back.values, sigma.values) and back.params == sigma.params


def test_array_symbol_round_trip(tmp_path):
    g = TorusGrid(1, 8)
    sigma = Symbol.from_array(g, np.arange(64.0).reshape(8, 8))
    dump(sigma, tmp_path / "s.bin")
    back = load(tmp_path / "s.bin")
    assert np.array_equal(back.values, sigma.values)


def test_kernel_round_trip(tmp_path):
    g = TorusGrid(1, 16)
    K = synthesize_kernel(make_oscillating_symbol(g, None, 0.0, 0.5, 0.5), 2, 0.5)
    header = dump(K, tmp_path / "k.bin")
    assert header["axes"] == ["y", "u"] and header["k"] == 2 and header["rho"] == 0.5
    back = load(tmp_path / "k.bin")
    assert isinstance(back, KernelSlice) and np.array_equal(back.values, K.values) and back.k == 2


def test_maximal_round_trip_is_real(tmp_path):
    prof = hardy_littlewood(random_trig_polynomial(TorusGrid(1, 16), 0, 0), 1.5)
    header = dump(prof, tmp_path / "m.bin")
    assert not header["complex"] and header["r"] == 1.5 and header["family"] == "dyadic"
    assert (tmp_path / "m.bin").stat().st_size == 16 * 8
    back = load(tmp_path / "m.bin")
    assert isinstance(back, MaximalProfile) and np.array_equal(back.array, prof.array) and back.r == 1.5


def test_sidecar_and_errors(tmp_path):
    assert sidecar_path(tmp_path / "a.bin").name == "a.bin.json"
    with pytest.raises(TypeError):
        dump(np.zeros(3), tmp_path / "x.bin")
    (tmp_path / "y.bin").write_bytes(b"")
    sidecar_path(tmp_path / "y.bin").write_text(json.dumps({"kind": "mystery", "n": 1, "N": 8, "shape": [0]}))
    with pytest.raises(ValueError):
        load(tmp_path / "y.bin")
