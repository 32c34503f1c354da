"""Real-space evolution on a ring and correlation-function spectroscopy.

Conventions
-----------
* Sites ``n = 0 .. N-1`` with periodic boundaries; grid momenta
  ``k_j = 2 pi j / N`` and ``psi(n) = N**-0.5 * sum_k exp(i k n) psi(k)``.
* Times ``t`` and lags ``tau`` are counted in whole periods internally; the
  physical time in steps is ``m`` times that.
* ``C_M(omega) = (1/T_tau) sum_tau exp(i omega tau) Cbar(tau)`` with ``tau``
  in steps, so for a uniform-weight initial state
  ``2N * Re C_M(omega_j)`` converges to the finite-lattice spectral
  magnetization at the grid frequency ``omega_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bands import EDGE_EPS, eigenvectors, omega_plus
from .bloch import period_operator
from .errors import BandEdgeDegeneracy, InsufficientHistory
from .magnetization import eigenstate_magnetization
from .walk import WalkSpec, canonical_phase_reduction

__all__ = [
    "LatticeState",
    "CorrelationSeries",
    "lattice_momenta",
    "choose_lattice_size",
    "uniform_weight_amplitudes",
    "build_uniform_weight_state",
    "momentum_eigenstate",
    "evolve",
    "evolve_momentum",
    "trajectory",
    "correlation",
    "correlation_spectrum",
    "grid_spectral_magnetization",
]


@dataclass(frozen=True)
class LatticeState:
    n_sites: int
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi_plus) ** 2) + np.sum(np.abs(self.psi_minus) ** 2))

    @property
    def magnetization(self) -> float:
        return float(np.sum(np.abs(self.psi_plus) ** 2) - np.sum(np.abs(self.psi_minus) ** 2))

    def as_array(self) -> np.ndarray:
        return np.stack([self.psi_plus, self.psi_minus])

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "LatticeState":
        arr = np.asarray(arr, dtype=complex)
        return cls(arr.shape[-1], arr[0].copy(), arr[1].copy())

    @classmethod
    def localized(cls, n_sites: int, site: int, spinor=(1.0, 0.0)) -> "LatticeState":
        arr = np.zeros((2, n_sites), dtype=complex)
        arr[:, site % n_sites] = spinor
        arr /= np.sqrt(np.sum(np.abs(arr) ** 2))
        return cls.from_array(arr)


@dataclass(frozen=True)
class CorrelationSeries:
    """Time-averaged correlator ``Cbar(tau)`` for ``tau = 0, m, 2m, ...``."""

    tau: np.ndarray
    values: np.ndarray
    t_average_count: int
    m: int
    n_sites: int


def lattice_momenta(n_sites: int) -> np.ndarray:
    """``2 pi j / N`` for ``j = 0 .. N-1``."""
    return 2.0 * math.pi * np.arange(n_sites) / n_sites


def _edge_clear(spec: WalkSpec, n_sites: int, edge_eps: float) -> bool:
    re = np.real(period_operator(spec, lattice_momenta(n_sites)).u11)
    return bool(np.all(np.sqrt(np.clip(1.0 - re * re, 0.0, None)) >= edge_eps))


def choose_lattice_size(
    spec: WalkSpec, n_sites: int = 64, edge_eps: float = EDGE_EPS, max_shift: int = 16
) -> int:
    """``n_sites`` or the nearest size (trying +1, -1, +2, ...) whose grid avoids band edges."""
    for shift in range(max_shift + 1):
        for cand in (n_sites + shift, n_sites - shift) if shift else (n_sites,):
            if cand >= 2 and _edge_clear(spec, cand, edge_eps):
                return cand
    raise BandEdgeDegeneracy(
        f"no lattice size within {max_shift} of {n_sites} avoids the band edges"
    )


def uniform_weight_amplitudes(spec: WalkSpec, n_sites: int, seed: int) -> np.ndarray:
    """Coefficients of every band eigenstate, shape ``(2, N)`` (rows: + and - branch).

    Magnitudes are all ``1/sqrt(2N)``; phases are uniform on ``[0, 2 pi)`` from
    a seeded :func:`numpy.random.default_rng`.
    """
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=(2, n_sites))
    return np.exp(1j * phases) / math.sqrt(2 * n_sites)


def _to_real_space(phi_k: np.ndarray) -> np.ndarray:
    n = phi_k.shape[-1]
    return math.sqrt(n) * np.fft.ifft(phi_k, axis=-1)


def _to_momentum(psi_n: np.ndarray) -> np.ndarray:
    n = psi_n.shape[-1]
    return np.fft.fft(psi_n, axis=-1) / math.sqrt(n)


def build_uniform_weight_state(
    spec: WalkSpec, n_sites: int, seed: int, edge_eps: float = EDGE_EPS
) -> LatticeState:
    """Equal-magnitude, random-phase superposition of all ``2N`` eigenstates."""
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    spec, _ = canonical_phase_reduction(spec)
    ks = lattice_momenta(n_sites)
    alpha = uniform_weight_amplitudes(spec, n_sites, seed)
    phi = np.zeros((2, n_sites), dtype=complex)
    for row, branch in enumerate((+1, -1)):
        x, y, _ = eigenvectors(spec, ks, branch, edge_eps)
        phi[0] += alpha[row] * x
        phi[1] += alpha[row] * y
    return LatticeState.from_array(_to_real_space(phi))


def momentum_eigenstate(spec: WalkSpec, n_sites: int, j: int, branch=+1) -> LatticeState:
    """Normalized plane-wave eigenstate at grid momentum ``2 pi j / N``."""
    k = 2.0 * math.pi * j / n_sites
    x, y, _ = eigenvectors(spec, k, branch)
    n = np.arange(n_sites)
    wave = np.exp(1j * k * n) / math.sqrt(n_sites)
    return LatticeState(n_sites, complex(x) * wave, complex(y) * wave)


def _coin_factors(spec: WalkSpec):
    out = []
    for c in spec.coins:
        g = np.exp(1j * c.phi)
        ct, st = math.cos(c.theta), math.sin(c.theta)
        out.append(
            (
                g * np.exp(1j * c.phi1) * ct,
                g * np.exp(1j * c.phi2) * st,
                -g * np.exp(-1j * c.phi2) * st,
                g * np.exp(-1j * c.phi1) * ct,
            )
        )
    return out


def trajectory(state: LatticeState, spec: WalkSpec, n_periods: int) -> np.ndarray:
    """Array of shape ``(n_periods + 1, 2, N)``; entry ``t`` is the state after ``t`` periods.

    Each step applies the coin on every site, then shifts ``+`` one site to
    the right and ``-`` one site to the left.
    """
    coins = _coin_factors(spec)
    out = np.empty((n_periods + 1, 2, state.n_sites), dtype=complex)
    p = np.array(state.psi_plus, dtype=complex)
    q = np.array(state.psi_minus, dtype=complex)
    out[0, 0], out[0, 1] = p, q
    for t in range(1, n_periods + 1):
        for a, b, c, d in coins:
            p, q = a * p + b * q, c * p + d * q
            p = np.roll(p, 1)
            q = np.roll(q, -1)
        out[t, 0], out[t, 1] = p, q
    return out


def evolve(state: LatticeState, spec: WalkSpec, n_periods: int) -> list[LatticeState]:
    """Snapshots after ``0, 1, ..., n_periods`` full periods (index = period count)."""
    return [LatticeState.from_array(a) for a in trajectory(state, spec, n_periods)]


def evolve_momentum(state: LatticeState, spec: WalkSpec, n_periods: int) -> LatticeState:
    """Fast path: apply ``U(k)**n_periods`` on the lattice momenta (global phases included)."""
    reduced, total_phase = canonical_phase_reduction(spec)
    ks = lattice_momenta(state.n_sites)
    mats = period_operator(reduced, ks).matrix()
    power = np.linalg.matrix_power(mats, n_periods) * np.exp(1j * total_phase * n_periods)
    phi = _to_momentum(state.as_array())
    out = np.einsum("kab,bk->ak", power, phi)
    return LatticeState.from_array(_to_real_space(out))


def correlation(
    spec: WalkSpec,
    n_sites: int,
    seed: int,
    T_periods: int,
    tau_max_periods: int,
    state: LatticeState | None = None,
) -> CorrelationSeries:
    """Time-averaged magnetization correlator.

    ``Cbar(tau) = (1/T) sum_t sum_n [psi+(n,t) psi+*(n,t-tau) - psi-(n,t) psi-*(n,t-tau)]``
    with ``t`` running over ``T_periods`` consecutive periods starting at
    ``tau_max_periods``, so every lag is averaged over the same number of
    samples.  The walk is evolved for ``T_periods + tau_max_periods - 1``
    periods; lags are evaluated with zero-padded FFTs along time.
    """
    if T_periods < 1 or tau_max_periods < 0:
        raise InsufficientHistory("T_periods must be >= 1 and tau_max_periods >= 0")
    if T_periods < tau_max_periods:
        raise InsufficientHistory(
            f"T_periods={T_periods} shorter than tau_max_periods={tau_max_periods}"
        )
    reduced, _ = canonical_phase_reduction(spec)
    if state is None:
        state = build_uniform_weight_state(reduced, n_sites, seed)
    n_sites = state.n_sites
    L = T_periods + tau_max_periods
    traj = trajectory(state, reduced, L - 1)
    window = np.zeros_like(traj)
    window[tau_max_periods:] = traj[tau_max_periods:]
    nfft = 1 << int(math.ceil(math.log2(2 * L)))
    fa = np.fft.fft(window, n=nfft, axis=0)
    fb = np.fft.fft(traj, n=nfft, axis=0)
    sigma = np.array([1.0, -1.0])[None, :, None]
    cross = np.sum(fa * np.conj(fb) * sigma, axis=(1, 2))
    corr = np.fft.ifft(cross)[: tau_max_periods + 1] / T_periods
    m = reduced.m
    return CorrelationSeries(
        tau=m * np.arange(tau_max_periods + 1),
        values=corr,
        t_average_count=T_periods,
        m=m,
        n_sites=n_sites,
    )


def correlation_spectrum(series: CorrelationSeries, omega_list) -> dict[float, complex]:
    """``C_M(omega) = (1/T_tau) sum_tau exp(i omega tau) Cbar(tau)`` for each omega."""
    omegas = np.atleast_1d(np.asarray(omega_list, dtype=float))
    phase = np.exp(1j * np.outer(omegas, series.tau))
    vals = phase @ series.values / series.values.size
    return {float(w): complex(v) for w, v in zip(omegas, vals)}


def grid_spectral_magnetization(
    spec: WalkSpec, n_sites: int, tol: float = 1e-9
) -> list[tuple[float, float, int]]:
    """Finite-lattice spectral magnetization of the upper band.

    Groups lattice momenta whose ``omega_plus`` agree within ``tol`` and
    returns ``(omega, sum of M_plus, count)`` sorted by frequency.
    """
    spec, _ = canonical_phase_reduction(spec)
    ks = lattice_momenta(n_sites)
    w = omega_plus(spec, ks)
    mp = eigenstate_magnetization(spec, ks, +1)
    order = np.argsort(w)
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(w[i] - w[groups[-1][0]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [
        (float(np.mean(w[g])), float(np.sum(mp[g])), len(g)) for g in groups
    ]
