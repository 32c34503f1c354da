import math

import numpy as np
import pytest
from scipy.optimize import brentq
from hypothesis import given
from hypothesis import strategies as st

from dtqw_ratchet.bands import IsoFrequencySolver, eigenvector
from dtqw_ratchet.errors import BandEdgeDegeneracy, Excluded
from dtqw_ratchet.magnetization import (
    band_interval,
    eigenstate_magnetization,
    monochromatic_magnetization,
    spectral_magnetization,
    spectral_magnetization_curve,
    total_magnetization,
)
from dtqw_ratchet.walk import WalkSpec

from conftest import brute_eig, m2_spec, m3_spec, random_spec, specs


def test_m1_quarter_turn():
    m = eigenstate_magnetization(WalkSpec.from_angles([math.pi / 4]), math.pi / 2, +1)
    assert m == pytest.approx(math.cos(math.pi / 4), abs=1e-15)
    assert m == pytest.approx(0.70711, abs=1e-5)


def test_m1_zero_momentum():
    assert eigenstate_magnetization(WalkSpec.from_angles([0.6]), 0.0) == 0.0


def test_m2_broken_value_matches_diagonalization():
    spec = m2_spec(math.pi / 5)
    (_, m_plus), _ = brute_eig(spec, 0.0)
    got = eigenstate_magnetization(spec, 0.0, +1)
    assert got == pytest.approx(m_plus, abs=1e-12)
    assert got == pytest.approx(-0.2198498, abs=1e-6)


def test_formula_matches_spinor():
    spec = m3_spec(math.pi / 2)
    for k in (-2.5, -0.4, 0.9, 2.2):
        assert eigenstate_magnetization(spec, k) == pytest.approx(eigenvector(spec, k).magnetization, abs=1e-12)


def test_edge_raises():
    with pytest.raises(BandEdgeDegeneracy):
        eigenstate_magnetization(WalkSpec.from_angles([0.0]), 0.0)


@given(specs(max_m=3), st.floats(-math.pi, math.pi))
def test_branches_opposite(spec, k):
    try:
        mp = eigenstate_magnetization(spec, k, +1)
        mm = eigenstate_magnetization(spec, k, -1)
    except BandEdgeDegeneracy:
        return
    assert mp == -mm
    assert monochromatic_magnetization(spec, k) == 0.0


def test_monochromatic_random_m3():
    spec = random_spec(np.random.default_rng(7), 3)
    assert abs(monochromatic_magnetization(spec, 0.7)) < 1e-12


def test_monochromatic_flat_band():
    spec = WalkSpec.from_angles([math.pi / 2])
    assert abs(eigenstate_magnetization(spec, 0.3, +1)) < 1e-15
    assert monochromatic_magnetization(spec, 0.3) == 0.0


def test_total_magnetization_vanishes():
    assert total_magnetization(m2_spec(math.pi / 5), 256) == pytest.approx(0.0, abs=256e-12)
    assert total_magnetization(WalkSpec.from_angles([0.5]), 1) == 0.0


def test_m1_spectral_vanishes():
    spec = WalkSpec.from_angles([0.9], phi1=[0.4], phi2=[-1.3])
    lo, hi = band_interval(spec)
    for w in np.linspace(lo, hi, 12)[1:-1]:
        assert abs(spectral_magnetization(spec, w).m_s) < 1e-9


def test_m2_symmetric_spectral_vanishes():
    curve = spectral_magnetization_curve(m2_spec(0.0), 64)
    assert max(abs(s.m_s) for s in curve if not s.excluded) < 1e-9


def test_m2_broken_closed_form():
    delta = math.pi / 5
    curve = spectral_magnetization_curve(m2_spec(delta), 128)
    s1, s2 = math.sin(math.pi / 4), math.sin(math.pi / 6)
    checked = 0
    for s in curve:
        if abs(math.sin(2 * s.omega)) > 0.1:
            expected = -4 * s1 * s2 * math.sin(delta) / abs(math.sin(2 * s.omega))
            assert s.m_s == pytest.approx(expected, abs=1e-8)
            assert s.degeneracy == 4
            checked += 1
    assert checked > 100


def _brute_omega_plus(spec, k):
    return brute_eig(spec, k)[0][0]


def test_m2_direct_root_sum_oracle():
    # roots located independently: dense scan of numpy eigenphases + brentq
    spec = m2_spec(math.pi / 5)
    w = 0.9
    ks = np.linspace(-math.pi, math.pi, 2001)
    f = np.array([_brute_omega_plus(spec, k) - w for k in ks])
    roots = [
        brentq(lambda k: _brute_omega_plus(spec, k) - w, ks[i], ks[i + 1], xtol=1e-14)
        for i in np.flatnonzero(f[:-1] * f[1:] < 0)
    ]
    assert len(roots) == 4
    direct = sum(brute_eig(spec, k)[0][1] for k in roots)
    sample = spectral_magnetization(spec, w)
    assert sample.degeneracy == 4
    assert sample.m_s == pytest.approx(direct, abs=1e-10)


def test_m3_opposite_signs():
    a = spectral_magnetization_curve(m3_spec(math.pi / 2), 64)
    b = spectral_magnetization_curve(m3_spec(-math.pi / 2), 64)
    va = np.array([s.m_s for s in a])
    vb = np.array([s.m_s for s in b])
    assert np.nanmax(np.abs(va)) > 1e-3
    assert np.allclose(va, -vb, atol=1e-9, equal_nan=True)
    zero = spectral_magnetization_curve(m3_spec(0.0), 64)
    assert max(abs(s.m_s) for s in zero if not s.excluded) < 1e-9


def test_excluded_at_edge():
    spec = WalkSpec.from_angles([math.pi / 4])
    with pytest.raises(Excluded):
        spectral_magnetization(spec, math.pi, +1)


def test_lower_branch_is_mirror():
    spec = m2_spec(math.pi / 5)
    up = spectral_magnetization_curve(spec, 32, +1)
    down = spectral_magnetization_curve(spec, 32, -1)
    for a, b in zip(up, down):
        assert b.omega == -a.omega
        assert b.m_s == pytest.approx(-a.m_s, abs=1e-10)
