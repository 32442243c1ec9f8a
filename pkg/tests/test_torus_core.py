import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_dft_1d
from torus_pdo.torus_core import (
    LatticeWindow,
    PeriodicFunction,
    SpectralCoefficients,
    TorusGrid,
    bracket,
    forward_dft,
    inverse_dft,
    random_trig_polynomial,
    trial_rng,
    trig_polynomial,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        TorusGrid(1, 12)
    with pytest.raises(ValueError):
        TorusGrid(4, 8)
    with pytest.raises(ValueError):
        TorusGrid(1, 4)
    g = TorusGrid(2, 16)
    assert g.size == 256 and g.spacing == 1 / 16 and g.levels == 4
    assert g.points().shape == (16, 16, 2)


def test_window_is_symmetric_box():
    w = LatticeWindow(1, 8)
    assert sorted(w.axis_frequencies().tolist()) == list(range(-4, 4))
    assert w.contains((0,)) and w.contains((-4,)) and not w.contains((4,))
    assert w.index_of(-1) == (7,)
    with pytest.raises(ValueError):
        w.index_of(4)


def test_rejects_non_finite():
    g = TorusGrid(1, 8)
    bad = np.zeros(8)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        PeriodicFunction(g, bad)
    with pytest.raises(ValueError):
        SpectralCoefficients(g.window(), np.full(8, np.inf))


def test_constant_has_only_zero_mode():
    g = TorusGrid(1, 32)
    c = forward_dft(PeriodicFunction(g, np.ones(32))).coeffs
    assert abs(c[0] - 1) < 1e-12
    assert np.max(np.abs(c[1:])) < 1e-12


def test_single_mode():
    g = TorusGrid(1, 64)
    f = PeriodicFunction.from_callable(g, lambda x: np.exp(2j * np.pi * 3 * x[..., 0]))
    c = forward_dft(f)
    assert abs(c[3] - 1) < 1e-12
    rest = np.array(c.coeffs)
    rest[c.window.index_of(3)] = 0
    assert np.max(np.abs(rest)) < 1e-12


def test_forward_matches_naive_sum():
    g = TorusGrid(1, 16)
    f = random_trig_polynomial(g, 3, 0, band=8)
    c = forward_dft(f)
    ref = naive_dft_1d(f.samples)
    assert max(abs(c[k] - v) for k, v in ref.items()) < 1e-12


def test_recovers_generating_coefficients():
    g = TorusGrid(1, 64)
    rng = np.random.default_rng(1)
    coeffs = {k: complex(*rng.standard_normal(2)) for k in range(-16, 17)}
    c = forward_dft(trig_polynomial(g, coeffs))
    assert max(abs(c[k] - v) for k, v in coeffs.items()) < 1e-10


def test_inverse_examples():
    g = TorusGrid(1, 32)
    one = inverse_dft(SpectralCoefficients.from_dict(g.window(), {0: 1.0}))
    assert np.allclose(one.samples, 1.0, atol=1e-14)
    cos = trig_polynomial(g, {1: 0.5, -1: 0.5})
    x = np.arange(32) / 32
    assert np.max(np.abs(cos.samples - np.cos(2 * np.pi * x))) < 1e-12


def test_inverse_grid_mismatch():
    c = SpectralCoefficients(LatticeWindow(1, 16), np.zeros(16))
    with pytest.raises(ValueError):
        inverse_dft(c, TorusGrid(1, 32))


def test_bracket_values():
    assert bracket(0) == 1.0
    assert abs(bracket(1) - np.sqrt(2)) < 1e-15
    assert abs(bracket(np.array([3, 4])) - np.sqrt(26)) < 1e-15
    assert bracket(np.zeros((5, 2))).shape == (5,)


def test_trial_rng_is_counter_based():
    a = trial_rng(7, 3).standard_normal(4)
    trial_rng(7, 2).standard_normal(100)
    b = trial_rng(7, 3).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, trial_rng(7, 4).standard_normal(4))


def test_random_polynomial_band():
    g = TorusGrid(1, 64)
    c = forward_dft(random_trig_polynomial(g, 0, 0))
    r = c.window.norms()
    assert np.max(np.abs(c.coeffs[r > 16])) < 1e-12
    assert np.min(np.abs(c.coeffs[r <= 16])) > 0


grids = st.sampled_from([(1, 8), (1, 32), (1, 128), (2, 8), (2, 16), (3, 8)])


@settings(max_examples=25, deadline=None)
@given(grids, st.integers(0, 2**31 - 1))
def test_round_trip_and_parseval(nN, seed):
    g = TorusGrid(*nN)
    rng = np.random.default_rng(seed)
    f = PeriodicFunction(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    c = forward_dft(f)
    assert np.max(np.abs(inverse_dft(c, g).samples - f.samples)) < 1e-10
    lhs = np.mean(np.abs(f.samples) ** 2)
    assert abs(lhs - np.sum(np.abs(c.coeffs) ** 2)) <= 1e-10 * lhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10))
def test_linearity(seed, a, b):
    g = TorusGrid(2, 8)
    f = random_trig_polynomial(g, seed, 0, band=4)
    h = random_trig_polynomial(g, seed, 1, band=4)
    lhs = forward_dft(a * f + b * h).coeffs
    rhs = a * forward_dft(f).coeffs + b * forward_dft(h).coeffs
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, abs(a) + abs(b)) * 10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(0, 31))
def test_translation(seed, shift):
    g = TorusGrid(1, 32)
    f = random_trig_polynomial(g, seed, 0)
    shifted = PeriodicFunction(g, np.roll(f.samples, shift))  # f(x - a), a = shift/N
    xi = g.window().frequencies()[..., 0]
    expected = np.exp(-2j * np.pi * shift * xi / 32) * forward_dft(f).coeffs
    assert np.max(np.abs(forward_dft(shifted).coeffs - expected)) < 1e-10
