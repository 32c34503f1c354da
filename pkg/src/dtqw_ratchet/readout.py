"""Transmission-line readout: Lorentzian dip shifted by the walk's correlator.

``D(omega) = 1 - alpha_r / ((omega - omega_res)**2 + gamma**2)`` with
``omega_res = omega0 + chi * C_M(omega0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import NoDipFound, ZeroCoupling

__all__ = [
    "TransmissionModel",
    "lorentzian_dip",
    "transmission_curve",
    "extract_correlator_from_dip",
    "fit_lorentzian_dip",
]


@dataclass(frozen=True)
class TransmissionModel:
    omega0: float
    alpha_r: float
    gamma: float
    chi: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.alpha_r < 0:
            raise ValueError(f"alpha_r must be >= 0, got {self.alpha_r}")

    def resonance(self, c_m: float) -> float:
        return self.omega0 + self.chi * c_m


def lorentzian_dip(omega, omega_res, alpha_r, gamma):
    """``1 - D``: the depth profile of the dip."""
    omega = np.asarray(omega, dtype=float)
    return alpha_r / ((omega - omega_res) ** 2 + gamma**2)


def transmission_curve(model: TransmissionModel, c_m_at_omega0: float, omega_grid):
    """Rows ``(omega, D(omega))``."""
    grid = np.asarray(omega_grid, dtype=float)
    d = 1.0 - lorentzian_dip(grid, model.resonance(c_m_at_omega0), model.alpha_r, model.gamma)
    return list(zip(grid.tolist(), d.tolist()))


def fit_lorentzian_dip(omega, d, max_rms: float = 0.1):
    """Least-squares fit of ``(omega_res, alpha_r, gamma)`` to ``1 - d``.

    Starting values come from the sample minimum and the half-depth width.
    Raises :class:`NoDipFound` if the samples show no dip or the fit RMS
    residual, relative to the dip depth, exceeds ``max_rms``.
    """
    omega = np.asarray(omega, dtype=float)
    depth = 1.0 - np.asarray(d, dtype=float)
    if omega.size < 4:
        raise NoDipFound("need at least 4 samples")
    j = int(np.argmax(depth))
    peak = depth[j]
    if not peak > 0:
        raise NoDipFound("transmission never drops below 1")
    above = omega[depth >= 0.5 * peak]
    half_width = max(0.5 * (above.max() - above.min()), np.min(np.diff(np.sort(omega))))
    x0 = [omega[j], peak * half_width**2, half_width]

    def resid(p):
        return lorentzian_dip(omega, p[0], p[1], abs(p[2])) - depth

    sol = least_squares(resid, x0, x_scale=[half_width, peak * half_width**2, half_width],
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    omega_res, alpha_r, gamma = sol.x[0], sol.x[1], abs(sol.x[2])
    rms = math.sqrt(np.mean(sol.fun**2))
    if not sol.success or rms > max_rms * peak:
        raise NoDipFound(f"Lorentzian fit failed (rms {rms:.3g}, depth {peak:.3g})")
    if not (omega.min() <= omega_res <= omega.max()):
        raise NoDipFound("fitted resonance lies outside the sampled window")
    return float(omega_res), float(alpha_r), float(gamma)


def extract_correlator_from_dip(samples, omega0: float, chi: float, max_rms: float = 0.1) -> float:
    """Recover ``C_M(omega0) = (omega_res - omega0) / chi`` from ``(omega, D)`` samples."""
    if chi == 0:
        raise ZeroCoupling("chi = 0: the dip position carries no information about C_M")
    arr = np.asarray(samples, dtype=float)
    omega_res, _, _ = fit_lorentzian_dip(arr[:, 0], arr[:, 1], max_rms)
    return (omega_res - omega0) / chi
