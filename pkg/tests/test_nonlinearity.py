import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracnls.errors import ConfigurationError, CostError
from fracnls.grid import GridSpec, SpectralField, random_field, sobolev_norm
from fracnls.nonlinearity import (cubic, cubic_oracle, resonant_constant, resonant_decompose, resonant_decompose_multilinear,
                                  rho, rho_sobolev_norm, trilinear, trilinear_oracle)
from fracnls.operators import propagate_linear

from conftest import rel


def test_two_mode_hand_enumeration():
    # u = 1 + 2e^{ix}: |u|^2 u = (5 + 2e^{ix} + 2e^{-ix})(1 + 2e^{ix})
    f = SpectralField.from_modes(GridSpec(16), {0: 1, 1: 2})
    expected = {0: 9, 1: 12, 2: 4, -1: 2}
    for fn in (cubic, cubic_oracle):
        out = fn(f)
        for k in range(-8, 8):
            assert abs(out.coefficient(k) - expected.get(k, 0)) < 1e-13


def test_two_unit_modes():
    f = SpectralField.from_modes(GridSpec(16), {0: 1, 1: 1})
    out = cubic(f)
    assert out.coefficient(2) == pytest.approx(1, abs=1e-14)
    assert out.coefficient(0) == pytest.approx(3, abs=1e-14)
    assert out.coefficient(-1) == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("M,sigma,seed", [(16, 0.0, 1), (32, 1.0, 2), (64, 0.5, 3), (128, 1.5, 4)])
def test_cubic_matches_oracle(M, sigma, seed):
    f = random_field(GridSpec(M), sigma, seed)
    # the oracle sums over all grid frequencies and truncates, like the padded product
    assert rel(cubic(f).coeffs, cubic_oracle(f).coeffs) < 1e-12


def test_trilinear_matches_oracle_and_conjugates_middle():
    g = GridSpec(32)
    u, v, w = (random_field(g, 0.8, s) for s in (1, 2, 3))
    assert rel(trilinear(u, v, w).coeffs, trilinear_oracle(u, v, w).coeffs) < 1e-12
    assert rel(trilinear(u, v, w).coeffs, trilinear(w, v, u).coeffs) < 1e-13


def test_restricted_oracle_equals_decomposition():
    f = random_field(GridSpec(64), 0.9, 7)
    a, b = resonant_decompose(f), resonant_decompose(f, oracle=True)
    assert rel(a.R.coeffs, b.R.coeffs) < 1e-11
    assert rel(a.reconstruct(f).coeffs, cubic(f).coeffs) < 1e-13


def test_resonant_parts_single_mode():
    a = 0.8 - 0.3j
    f = SpectralField.from_modes(GridSpec(16), {3: a})
    p = resonant_decompose(f)
    assert p.P == pytest.approx(2 * abs(a) ** 2)
    assert p.rho.coefficient(3) == pytest.approx(-abs(a) ** 2 * a)
    assert np.max(np.abs(p.R.coeffs)) < 1e-15
    assert resonant_constant(f) == p.P


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), t=st.floats(-5, 5), theta=st.floats(0, 6.3))
def test_gauge_invariance(seed, t, theta):
    f = random_field(GridSpec(32), 1.0, seed)
    g = propagate_linear(f, t, 0.7) * np.exp(1j * theta)
    pf, pg = resonant_decompose(f), resonant_decompose(g)
    assert pg.P == pytest.approx(pf.P, rel=1e-13)
    assert rel(np.abs(pg.rho.coeffs), np.abs(pf.rho.coeffs)) < 1e-13
    assert rel(cubic(f * np.exp(1j * theta)).coeffs, np.exp(1j * theta) * cubic(f).coeffs) < 1e-13


def test_multilinear_linearity_and_diagonal():
    g = GridSpec(32)
    u, u2, v, w = (random_field(g, 1.0, s) for s in (1, 2, 3, 4))
    lam = 0.7 - 1.2j
    r1, R1 = resonant_decompose_multilinear(u + u2 * lam, v, w)
    ra, Ra = resonant_decompose_multilinear(u, v, w)
    rb, Rb = resonant_decompose_multilinear(u2, v, w)
    assert rel(r1.coeffs, (ra + rb * lam).coeffs) < 1e-13
    assert rel(R1.coeffs, (Ra + Rb * lam).coeffs) < 1e-12
    # antilinear in the middle slot
    r2, R2 = resonant_decompose_multilinear(u, v * lam, w)
    assert rel(R2.coeffs, (Ra * np.conj(lam)).coeffs) < 1e-12
    rd, Rd = resonant_decompose_multilinear(u, u, u)
    p = resonant_decompose(u)
    assert rel(rd.coeffs, p.rho.coeffs) < 1e-14 and rel(Rd.coeffs, p.R.coeffs) < 1e-12
    z = SpectralField.zeros(g)
    rz, Rz = resonant_decompose_multilinear(u, v, z)
    assert not rz.coeffs.any() and np.max(np.abs(Rz.coeffs)) < 1e-15


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), s=st.floats(0.51, 2.0), c=st.floats(0, 1))
def test_rho_norm_bound(seed, s, c):
    # sup|c_k|^2<k>^{2s} <= ||u||_{H^s}^2 gives ||rho(u)||_{H^{s+c}} <= ||u||_{H^s}^3 whenever c <= 2s
    f = random_field(GridSpec(64), 1.2, seed)
    assert rho_sobolev_norm(f, s, c) <= sobolev_norm(f, s) ** 3 * (1 + 1e-12)
    assert rho_sobolev_norm(f, s, c) == pytest.approx(sobolev_norm(rho(f), s + c), rel=1e-12)


def test_dealias_none_aliases():
    f = random_field(GridSpec(16), 0.0, 5)
    assert rel(cubic(f, "none").coeffs, cubic(f).coeffs) > 1e-3
    low = SpectralField.from_modes(GridSpec(16), {1: 1, -2: 0.5})
    assert rel(cubic(low, "none").coeffs, cubic(low).coeffs) < 1e-14
    with pytest.raises(ConfigurationError):
        cubic(f, "sometimes")


def test_oracle_refuses_large_grids():
    with pytest.raises(CostError):
        cubic_oracle(SpectralField.zeros(GridSpec(512)))
