"""Eigenstate, monochromatic, total and spectral magnetization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bands import (
    EDGE_EPS,
    N_SCAN,
    REFINE_TOL,
    IsoFrequencySet,
    IsoFrequencySolver,
    band_range,
    branch_sign,
    k_grid,
)
from .bloch import period_operator
from .errors import BandEdgeDegeneracy, Excluded
from .walk import WalkSpec

__all__ = [
    "SpectralSample",
    "eigenstate_magnetization",
    "monochromatic_magnetization",
    "total_magnetization",
    "spectral_magnetization",
    "spectral_magnetization_curve",
    "band_interval",
]


@dataclass(frozen=True)
class SpectralSample:
    omega: float
    m_s: float
    degeneracy: int
    excluded: bool = False


def eigenstate_magnetization(spec: WalkSpec, k, branch=+1, edge_eps: float = EDGE_EPS):
    """``M_branch(k) = -Im u11 / sin(m omega_branch)``; broadcasts over ``k``."""
    sgn = branch_sign(branch)
    u11 = np.asarray(period_operator(spec, k).u11)
    re = np.clip(u11.real, -1.0, 1.0)
    s = np.sqrt(1.0 - re * re)
    if np.any(s < edge_eps):
        raise BandEdgeDegeneracy(f"|sin(m*omega)| < {edge_eps:g} at requested k")
    out = -u11.imag / (sgn * s)
    return float(out) if out.ndim == 0 else out


def monochromatic_magnetization(spec: WalkSpec, k, edge_eps: float = EDGE_EPS):
    return eigenstate_magnetization(spec, k, +1, edge_eps) + eigenstate_magnetization(
        spec, k, -1, edge_eps
    )


def total_magnetization(spec: WalkSpec, n_k: int, edge_eps: float = EDGE_EPS) -> float:
    """Sum of monochromatic magnetizations over an ``n_k`` grid (edge points skipped)."""
    ks = k_grid(n_k) if n_k > 1 else np.zeros(1)
    re = np.clip(np.real(period_operator(spec, ks).u11), -1.0, 1.0)
    keep = np.sqrt(1.0 - re * re) >= edge_eps
    if not np.any(keep):
        return 0.0
    return float(np.sum(monochromatic_magnetization(spec, ks[keep], edge_eps)))


def _sum_over_roots(spec: WalkSpec, iso: IsoFrequencySet, edge_eps: float) -> SpectralSample:
    if not iso.roots:
        return SpectralSample(iso.omega, 0.0, 0)
    vals = eigenstate_magnetization(spec, np.array(iso.roots), iso.branch, edge_eps)
    m_s = float(np.dot(np.asarray(iso.multiplicities, dtype=float), vals))
    return SpectralSample(iso.omega, m_s, iso.degeneracy)


def spectral_magnetization(
    spec: WalkSpec,
    omega: float,
    branch=+1,
    n_scan: int = N_SCAN,
    refine_tol: float = REFINE_TOL,
    edge_eps: float = EDGE_EPS,
    solver: IsoFrequencySolver | None = None,
) -> SpectralSample:
    """Sum of ``M_branch`` over the iso-frequency set, weighted by root multiplicity.

    This is a plain sum, not an average; divide by ``degeneracy`` to normalize.
    """
    if abs(math.sin(spec.m * omega)) < edge_eps:
        raise Excluded(f"omega={omega} lies within {edge_eps:g} of a band edge")
    solver = solver or IsoFrequencySolver(spec, n_scan, refine_tol)
    return _sum_over_roots(spec, solver.solve(omega, branch), edge_eps)


def band_interval(spec: WalkSpec, n_scan: int = N_SCAN) -> tuple[float, float]:
    """Frequency range ``[omega_min, omega_max]`` of the upper band."""
    lo, hi = band_range(spec, n_scan)
    m = spec.m
    return math.acos(min(hi, 1.0)) / m, math.acos(max(lo, -1.0)) / m


def spectral_magnetization_curve(
    spec: WalkSpec,
    n_omega: int,
    branch=+1,
    n_scan: int = N_SCAN,
    refine_tol: float = REFINE_TOL,
    edge_eps: float = EDGE_EPS,
) -> list[SpectralSample]:
    """M_s on a midpoint grid spanning the band interior.

    Midpoints keep every sample strictly inside the band.  Samples within
    ``edge_eps`` of ``sin(m omega) = 0`` are flagged ``excluded`` with
    ``m_s = nan``.  The lower branch is the mirror image: ``M_s(-omega) =
    -M_s(omega)``.
    """
    if n_omega < 2:
        raise ValueError("n_omega must be >= 2")
    sgn = branch_sign(branch)
    solver = IsoFrequencySolver(spec, n_scan, refine_tol)
    m = spec.m
    w_lo = math.acos(min(solver.re_max, 1.0)) / m
    w_hi = math.acos(max(solver.re_min, -1.0)) / m
    grid = w_lo + (np.arange(n_omega) + 0.5) * (w_hi - w_lo) / n_omega
    keep = [
        not solver.flat and abs(math.sin(m * w)) >= edge_eps for w in grid
    ]
    isos = iter(solver.solve_many([sgn * w for w, ok in zip(grid, keep) if ok], sgn))
    out = []
    for w, ok in zip(grid, keep):
        if ok:
            out.append(_sum_over_roots(spec, next(isos), edge_eps))
        else:
            out.append(SpectralSample(sgn * float(w), math.nan, 0, True))
    return out
