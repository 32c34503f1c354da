import math

import numpy as np
import pytest

from dtqw_ratchet.bands import omega_plus
from dtqw_ratchet.dynamics import (
    LatticeState,
    build_uniform_weight_state,
    choose_lattice_size,
    correlation,
    correlation_spectrum,
    evolve,
    evolve_momentum,
    grid_spectral_magnetization,
    lattice_momenta,
    momentum_eigenstate,
    trajectory,
)
from dtqw_ratchet.errors import BandEdgeDegeneracy, InsufficientHistory
from dtqw_ratchet.walk import WalkSpec

from conftest import m2_spec, random_spec, step_matrix


def _dense_step(state: np.ndarray, theta, phi, phi1, phi2) -> np.ndarray:
    # site-by-site coin, then explicit shift on the ring
    n = state.shape[1]
    coin = np.exp(1j * phi) * step_matrix(theta, phi1, phi2, 0.0)
    out = np.zeros_like(state)
    for site in range(n):
        a, b = coin @ state[:, site]
        out[0, (site + 1) % n] += a
        out[1, (site - 1) % n] += b
    return out


def test_uniform_state_normalized_and_deterministic():
    spec = m2_spec(math.pi / 5)
    a = build_uniform_weight_state(spec, 32, seed=4)
    b = build_uniform_weight_state(spec, 32, seed=4)
    assert a.norm == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(a.as_array(), b.as_array())
    c = build_uniform_weight_state(spec, 32, seed=5)
    assert not np.array_equal(a.as_array(), c.as_array())


def test_trajectory_matches_dense_stepping(rng):
    spec = random_spec(rng, 3)
    spec = WalkSpec(3, tuple(type(c)(c.theta, 0.25, c.phi1, c.phi2) for c in spec.coins))
    state = LatticeState.localized(12, 3, (0.6, 0.8j))
    traj = trajectory(state, spec, 4)
    ref = state.as_array()
    for t in range(1, 5):
        for c in spec.coins:
            ref = _dense_step(ref, c.theta, c.phi, c.phi1, c.phi2)
        assert np.allclose(traj[t], ref, atol=1e-13)


def test_evolve_snapshots_and_norm(rng):
    spec = random_spec(rng, 2)
    state = build_uniform_weight_state(spec, 16, seed=1)
    snaps = evolve(state, spec, 10)
    assert len(snaps) == 11
    assert np.array_equal(snaps[0].as_array(), state.as_array())
    assert all(abs(s.norm - 1.0) < 1e-12 for s in snaps)


def test_momentum_path_matches_real_space(rng):
    spec = random_spec(rng, 3)
    spec = WalkSpec(3, tuple(type(c)(c.theta, -0.4, c.phi1, c.phi2) for c in spec.coins))
    state = LatticeState.localized(20, 7, (1.0, 1.0j))
    a = evolve(state, spec, 9)[-1].as_array()
    b = evolve_momentum(state, spec, 9).as_array()
    assert np.allclose(a, b, atol=1e-12)


def test_momentum_eigenstate_phase():
    spec = m2_spec(math.pi / 5)
    N = 24
    for j in (1, 5, 17):
        st = momentum_eigenstate(spec, N, j, +1)
        after = evolve(st, spec, 1)[-1].as_array()
        w = omega_plus(spec, 2 * math.pi * j / N)
        assert np.allclose(after, np.exp(-1j * w * spec.m) * st.as_array(), atol=1e-10)


def test_correlation_zero_lag_is_magnetization():
    spec = m2_spec(math.pi / 5)
    N, T = 16, 40
    series = correlation(spec, N, seed=2, T_periods=T, tau_max_periods=8)
    state = build_uniform_weight_state(spec, N, seed=2)
    mags = [s.magnetization for s in evolve(state, spec, 8 + T - 1)[8:]]
    assert abs(series.values[0].imag) < 1e-12
    assert series.values[0].real == pytest.approx(np.mean(mags), abs=1e-12)


def test_correlation_matches_direct_sum():
    spec = m2_spec(math.pi / 5)
    N, T, L = 12, 20, 6
    series = correlation(spec, N, seed=0, T_periods=T, tau_max_periods=L)
    traj = trajectory(build_uniform_weight_state(spec, N, 0), spec, T + L - 1)
    sig = np.array([1.0, -1.0])[:, None]
    for tau in range(L + 1):
        direct = np.mean(
            [np.sum(sig * traj[t] * np.conj(traj[t - tau])) for t in range(L, L + T)]
        )
        assert abs(series.values[tau] - direct) < 1e-12
    assert np.array_equal(series.tau, 2 * np.arange(L + 1))


def test_flat_band_correlation_vanishes():
    spec = WalkSpec.from_angles([math.pi / 2])
    N = choose_lattice_size(spec, 16)
    series = correlation(spec, N, 0, 64, 32)
    assert np.max(np.abs(series.values)) < 1e-10


def test_insufficient_history():
    with pytest.raises(InsufficientHistory):
        correlation(m2_spec(), 16, 0, 10, 20)


def test_choose_lattice_size():
    assert choose_lattice_size(m2_spec(math.pi / 5), 64) == 64
    # free walk: k = 0 sits on a band edge for every ring size
    with pytest.raises(BandEdgeDegeneracy):
        choose_lattice_size(WalkSpec.from_angles([0.0]), 64)


def test_spectrum_far_from_band_is_small():
    spec = m2_spec(math.pi / 5)
    series = correlation(spec, 32, 0, 1024, 1024)
    # the band spans roughly [0.62, 1.34]; 0.05 lies well outside it
    val = correlation_spectrum(series, [0.05])[0.05]
    inside = max(abs(v) for v in correlation_spectrum(series, [g[0] for g in grid_spectral_magnetization(spec, 32)]).values())
    assert abs(val) < 0.05 * inside


def test_m1_spectrum_vanishes():
    # K = phi1 = 0: the reflection k -> -k maps the ring momenta onto themselves
    spec = WalkSpec.from_angles([0.9], phi2=[-0.8])
    N = choose_lattice_size(spec, 32)
    series = correlation(spec, N, 0, 2048, 2048)
    grid = grid_spectral_magnetization(spec, N)
    assert max(abs(m) for _, m, _ in grid) < 1e-12
    spec_vals = correlation_spectrum(series, [g[0] for g in grid])
    assert max(2 * N * abs(v.real) for v in spec_vals.values()) < 0.05


def test_off_grid_reflection_still_obeys_identity():
    # K = 0.3 is not commensurate with 2 pi / N, so finite-ring sums need not cancel,
    # but the correlator must still track them
    spec = WalkSpec.from_angles([0.9], phi1=[0.3], phi2=[-0.8])
    N = choose_lattice_size(spec, 32)
    series = correlation(spec, N, 0, 4096, 4096)
    grid = grid_spectral_magnetization(spec, N)
    vals = correlation_spectrum(series, [g[0] for g in grid])
    resid = [abs(2 * N * v.real - m) for (_, m, _), v in zip(grid, vals.values())]
    assert max(abs(m) for _, m, _ in grid) > 0.1
    assert max(resid) < 0.05


def test_grid_spectral_magnetization_counts():
    spec = m2_spec(math.pi / 5)
    grid = grid_spectral_magnetization(spec, 64)
    assert sum(c for _, _, c in grid) == 64
    ws = omega_plus(spec, lattice_momenta(64))
    assert {round(w, 9) for w in ws} == {round(w, 9) for w, _, _ in grid}
