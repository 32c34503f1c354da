import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtqw_ratchet.bands import (
    IsoFrequencySolver,
    dispersion,
    eigenvector,
    eigenvectors,
    iso_frequency_set,
    k_grid,
    omega_plus,
    sample_bands,
)
from dtqw_ratchet.bloch import period_operator
from dtqw_ratchet.errors import BandEdgeDegeneracy, OutOfBand, UnresolvedRoot
from dtqw_ratchet.walk import WalkSpec

from conftest import brute_eig, brute_period, m2_spec, specs


def test_free_walk_dispersion_is_abs_k():
    ks = k_grid(64)
    assert np.allclose(omega_plus(WalkSpec.from_angles([0.0]), ks), np.abs(ks), atol=1e-12)


def test_flat_band_m1():
    bp = dispersion(WalkSpec.from_angles([math.pi / 2]), k_grid(32))
    assert np.allclose(bp.omega_plus, math.pi / 2, atol=1e-15)
    assert np.allclose(bp.omega_minus, -math.pi / 2, atol=1e-15)


def test_m2_band_value():
    w = omega_plus(WalkSpec.from_angles([math.pi / 4, math.pi / 6]), 0.0)
    assert w == pytest.approx(0.5 * math.acos(0.25881904510252074), abs=1e-15)
    assert w == pytest.approx(0.65450, abs=1e-5)


def test_m2_phase_shifted_band_bottom():
    spec = WalkSpec.from_angles([math.pi / 4, math.pi / 6], phi2=[math.pi, 0.0])
    assert omega_plus(spec, 0.0) == pytest.approx(0.5 * math.acos(0.96592582628906831), abs=1e-14)
    assert omega_plus(spec, 0.0) == pytest.approx(0.13090, abs=1e-5)


@given(specs(max_m=3), st.floats(-math.pi, math.pi))
def test_band_antisymmetry_and_principal_range(spec, k):
    bp = dispersion(spec, k)
    assert bp.omega_minus == -bp.omega_plus
    assert 0.0 <= bp.omega_plus <= math.pi / spec.m


@given(specs(max_m=3), st.floats(-math.pi, math.pi), st.sampled_from([+1, -1]))
def test_eigen_residual(spec, k, branch):
    u = brute_period(spec, k)
    try:
        x, y, w = eigenvectors(spec, k, branch)
    except BandEdgeDegeneracy:
        return
    v = np.array([complex(x), complex(y)])
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    assert np.linalg.norm(u @ v - np.exp(-1j * spec.m * float(w)) * v) < 1e-10


def test_eigenvector_quarter_turn():
    spec = WalkSpec.from_angles([math.pi / 4])
    v = eigenvector(spec, math.pi / 2, +1)
    u = brute_period(spec, math.pi / 2)
    w = omega_plus(spec, math.pi / 2)
    assert np.linalg.norm(u @ v.as_array() - np.exp(-1j * w) * v.as_array()) < 1e-10


def test_eigenvector_when_u12_vanishes():
    # theta = 0: U is diagonal, + branch at k < 0 is the lower spin state
    v = eigenvector(WalkSpec.from_angles([0.0]), -1.0, +1)
    assert abs(v.psi_plus) < 1e-15
    assert abs(abs(v.psi_minus) - 1) < 1e-15


def test_eigenvector_at_band_edge_raises():
    with pytest.raises(BandEdgeDegeneracy):
        eigenvector(WalkSpec.from_angles([0.0]), 0.0, +1)


def test_eigenvector_matches_numpy_magnetization():
    spec = m2_spec(math.pi / 5)
    for k in (-2.0, -0.3, 0.4, 1.9):
        (w_hi, m_hi), (w_lo, m_lo) = brute_eig(spec, k)
        v = eigenvector(spec, k, +1)
        assert omega_plus(spec, k) == pytest.approx(w_hi, abs=1e-12)
        assert v.magnetization == pytest.approx(m_hi, abs=1e-12)
        assert eigenvector(spec, k, -1).magnetization == pytest.approx(m_lo, abs=1e-12)


def test_sample_bands_grid():
    pts = sample_bands(WalkSpec.from_angles([0.3]), 2)
    assert len(pts) == 2
    assert pts[0].k == -math.pi and pts[1].k == 0.0
    with pytest.raises(ValueError):
        sample_bands(WalkSpec.from_angles([0.3]), 1)


def test_m1_iso_frequency_roots():
    iso = iso_frequency_set(WalkSpec.from_angles([math.pi / 4]), math.pi / 3)
    # Re u11 = cos(theta) cos(k) = 1/2  ->  k = +-pi/4
    assert iso.roots == pytest.approx((-math.pi / 4, math.pi / 4), abs=1e-12)
    assert iso.multiplicities == (1, 1)
    assert iso.roots[1] == pytest.approx(0.78540, abs=1e-5)


def test_m1_band_top_double_root():
    spec = WalkSpec.from_angles([math.pi / 4])
    top = math.acos(-math.cos(math.pi / 4))
    iso = iso_frequency_set(spec, top)
    assert len(iso.roots) == 1
    assert abs(np.exp(1j * iso.roots[0]) + 1) < 1e-6  # k = -pi, modulo 2 pi
    assert iso.multiplicities == (2,)
    assert iso.degeneracy == 2


def test_m2_generic_frequency_four_roots():
    spec = m2_spec(math.pi / 5)
    solver = IsoFrequencySolver(spec)
    lo, hi = math.acos(solver.re_max) / 2, math.acos(solver.re_min) / 2
    for w in np.linspace(lo, hi, 9)[1:-1]:
        iso = solver.solve(w)
        assert iso.degeneracy == 4
        assert np.max(np.abs(omega_plus(spec, np.array(iso.roots)) - w)) < 1e-9


def test_lower_branch_roots_mirror_upper():
    spec = m2_spec(math.pi / 5)
    up = iso_frequency_set(spec, 0.9, +1)
    down = iso_frequency_set(spec, -0.9, -1)
    assert up.roots == pytest.approx(down.roots, abs=1e-12)


def test_out_of_band():
    spec = WalkSpec.from_angles([math.pi / 4])
    with pytest.raises(OutOfBand):
        iso_frequency_set(spec, 0.1)
    with pytest.raises(OutOfBand):
        iso_frequency_set(spec, 0.5, -1)


def test_flat_band_unresolved():
    with pytest.raises(UnresolvedRoot):
        iso_frequency_set(WalkSpec.from_angles([math.pi / 2]), math.pi / 2)


@given(specs(max_m=3), st.floats(0.02, 0.98))
def test_iso_roots_satisfy_dispersion(spec, frac):
    solver = IsoFrequencySolver(spec)
    if solver.flat:
        return
    lo, hi = math.acos(min(solver.re_max, 1)) / spec.m, math.acos(max(solver.re_min, -1)) / spec.m
    w = lo + frac * (hi - lo)
    iso = solver.solve(w)
    assert iso.degeneracy >= 2 and iso.degeneracy % 2 == 0
    re = np.real(period_operator(spec, np.array(iso.roots)).u11)
    assert np.max(np.abs(re - math.cos(spec.m * w))) < 1e-11


def test_interior_tangent_double_root():
    # phi1 moves the lower band edge to k = 0.7, away from the grid ends
    spec = WalkSpec.from_angles([math.pi / 4], phi1=[0.7])
    iso = iso_frequency_set(spec, math.pi / 4)
    assert iso.degeneracy == 2
    assert iso.multiplicities == (2,)
    assert iso.roots[0] == pytest.approx(0.7, abs=1e-6)
