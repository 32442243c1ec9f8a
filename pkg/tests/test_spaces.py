import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import jbracket, psi
from torus_pdo.spaces import besov_decompose, besov_norm, default_besov_K, lp_norm, sobolev_norm
from torus_pdo.torus_core import PeriodicFunction, TorusGrid, random_trig_polynomial, trig_polynomial


def test_lp_examples():
    g = TorusGrid(1, 16)
    one = PeriodicFunction(g, np.ones(16))
    for p in (1, 2, 3.5, np.inf):
        assert abs(lp_norm(one, p) - 1) < 1e-14
    a = np.zeros(16)
    a[0] = 1.0
    assert abs(lp_norm(PeriodicFunction(g, a), 2) - 0.25) < 1e-15
    with pytest.raises(ValueError):
        lp_norm(one, 0.5)


def test_sobolev_of_single_mode():
    g = TorusGrid(2, 16)
    e = trig_polynomial(g, {(2, -3): 1.0})
    for s in (-1.5, 0.0, 1.0, 2.5):
        assert abs(sobolev_norm(e, s, 2) - jbracket((2, -3)) ** s) < 1e-10 * jbracket((2, -3)) ** abs(s)
    with pytest.raises(ValueError):
        sobolev_norm(e, 1, 1)


def test_sobolev_monotone_in_s():
    f = random_trig_polynomial(TorusGrid(1, 64), 0, 0)
    vals = [sobolev_norm(f, s, 3) for s in (-1, 0, 1, 2)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_besov_blocks_of_single_mode():
    g = TorusGrid(1, 64)
    e = trig_polynomial(g, {6: 1.0})
    dec = besov_decompose(e, default_besov_K(64))
    weights = {k: psi(6 / 2**k) for k in range(1, dec.K + 1)}
    assert abs(weights[2] - 0.5) < 1e-15 and abs(weights[3] - 0.5) < 1e-15
    for k, b in enumerate(dec.blocks, start=1):
        assert np.max(np.abs(b.samples - weights[k] * e.samples)) < 1e-12
    assert np.max(np.abs(dec.psi_part.samples)) < 1e-12
    assert abs(besov_norm(e, 1, 2, 2) - np.sqrt(20)) < 1e-12
    assert abs(besov_norm(e, 1, 2, np.inf) - 4) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(1, 64), (1, 256), (2, 32)]))
def test_besov_reconstruction(seed, nN):
    g = TorusGrid(*nN)
    f = random_trig_polynomial(g, seed, 0)  # band N/4 fits below 2^K
    dec = besov_decompose(f, default_besov_K(g.N))
    assert np.max(np.abs(dec.reconstruct().samples - f.samples)) < 1e-10


def test_besov_nonincreasing_in_q():
    f = random_trig_polynomial(TorusGrid(1, 128), 1, 0)
    vals = [besov_norm(f, 0.5, 2, q) for q in (1, 2, 4, np.inf)]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_besov_comparable_to_sobolev_when_p_q_two():
    for N in (64, 128, 256):
        f = random_trig_polynomial(TorusGrid(1, N), 2, 0)
        for s in (-1, 0, 1):
            ratio = besov_norm(f, s, 2, 2) / sobolev_norm(f, s, 2)
            assert 0.25 <= ratio <= 4


def test_besov_errors():
    f = random_trig_polynomial(TorusGrid(1, 32), 0, 0)
    with pytest.raises(ValueError):
        besov_decompose(f, 4)
    with pytest.raises(ValueError):
        besov_norm(f, 0, 1, 2)
    with pytest.raises(ValueError):
        besov_norm(f, 0, 2, 0.5)
