"""Generalized parity symmetry: analytic condition tables and numerical search.

A walk has generalized parity ``(K, G)`` when, for every ``k``,

    u11(2K - k) = conj(u11(k))
    u12(2K - k) = exp(iG) conj(u12(k))

Its presence pairs each eigenstate at ``k`` with one at ``2K - k`` of the
same frequency and opposite magnetization, so the spectral magnetization
vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .bands import EDGE_EPS, k_grid, omega_plus
from .bloch import period_operator
from .errors import WrongPeriod
from .magnetization import eigenstate_magnetization
from .walk import WalkSpec, m3_notation, wrap_angle

__all__ = [
    "ANGLE_TOL",
    "ACCEPT_RESIDUAL",
    "SymmetryWitness",
    "check_generalized_parity",
    "analytic_symmetry_m1",
    "analytic_symmetry_m2",
    "analytic_symmetry_m3",
    "analytic_symmetries",
    "search_symmetry",
    "magnetization_antisymmetry_check",
    "M3_PARITY_CASES",
]

ANGLE_TOL = 1e-9
ACCEPT_RESIDUAL = 1e-10
N_CHECK = 256


@dataclass(frozen=True)
class SymmetryWitness:
    K: float
    G: float
    residual: float
    provenance: str

    @property
    def accepted(self) -> bool:
        return self.residual < ACCEPT_RESIDUAL


def check_generalized_parity(spec: WalkSpec, K: float, G: float, n_k: int = N_CHECK) -> float:
    """Max deviation from both matrix-element relations on an ``n_k`` grid."""
    ks = k_grid(n_k)
    fwd = period_operator(spec, ks)
    ref = period_operator(spec, 2.0 * K - ks)
    r11 = np.abs(ref.u11 - np.conj(fwd.u11))
    r12 = np.abs(ref.u12 - np.exp(1j * G) * np.conj(fwd.u12))
    return float(max(r11.max(), r12.max()))


def _witness(spec, K, G, provenance, n_k=N_CHECK) -> SymmetryWitness:
    K, G = wrap_angle(K), wrap_angle(G)
    return SymmetryWitness(K, G, check_generalized_parity(spec, K, G, n_k), provenance)


def _is_multiple(x: float, unit: float, tol: float = ANGLE_TOL) -> bool:
    r = x / unit
    return abs(r - round(r)) * unit <= tol


def _is_int_pi(x: float, tol: float = ANGLE_TOL) -> bool:
    return _is_multiple(x, math.pi, tol)


def _is_odd_half_pi(x: float, tol: float = ANGLE_TOL) -> bool:
    return _is_multiple(x - math.pi / 2, math.pi, tol)


def analytic_symmetry_m1(spec: WalkSpec) -> SymmetryWitness:
    """A single-step walk is always symmetric with ``K = phi1``, ``G = 2(phi2 - phi1)``."""
    if spec.m != 1:
        raise WrongPeriod(f"expected m=1, got m={spec.m}")
    c = spec.coins[0]
    return _witness(spec, c.phi1, 2.0 * (c.phi2 - c.phi1), "m1")


def analytic_symmetry_m2(spec: WalkSpec, angle_tol: float = ANGLE_TOL) -> list[SymmetryWitness]:
    """Witnesses for the conditions S2,1 (theta1 = n pi), S2,2 (theta2 = n pi) and
    S2,3 (phi2_2 - phi2_1 = n pi).  An empty list predicts broken symmetry.

    In all three cases ``K = (phi1_1 + phi1_2) / 2``.  For S2,2 and S2,3 the
    phase is ``G = 2(phi2_1 - phi1_1)``, obtained by substituting the two-step
    matrix elements into the defining relations.
    """
    if spec.m != 2:
        raise WrongPeriod(f"expected m=2, got m={spec.m}")
    th1, th2 = spec.thetas
    p11, p12 = spec.phi1s
    p21, p22 = spec.phi2s
    K = 0.5 * (p11 + p12)
    out = []
    if _is_int_pi(th1, angle_tol):
        out.append(_witness(spec, K, 2.0 * (p22 - p11), "S2,1"))
    if _is_int_pi(th2, angle_tol):
        out.append(_witness(spec, K, 2.0 * (p21 - p11), "S2,2"))
    if _is_int_pi(p22 - p21, angle_tol):
        out.append(_witness(spec, K, 2.0 * (p21 - p11), "S2,3"))
    return out


# (i, j, parity_i, parity_j) -> (K, G) in terms of the m=3 notation.
# parity "odd": theta = (2n+1) pi/2, parity "even": theta = n pi.
M3_PARITY_CASES = {
    (1, 2, "odd", "even"): lambda n: (n.k_c, 2 * (n.k_e - 3 * n.k_c)),
    (1, 2, "even", "even"): lambda n: (n.k_a / 3, 2 * n.k_a / 3 - 2 * n.k_g),
    (1, 2, "even", "odd"): lambda n: (n.k_d, 2 * (n.k_f - n.k_d)),
    (1, 2, "odd", "odd"): lambda n: (n.k_b, 2 * (n.k_h - n.k_b)),
    (1, 3, "odd", "even"): lambda n: (n.k_b, 2 * (n.k_e - 3 * n.k_b)),
    (1, 3, "even", "even"): lambda n: (n.k_a / 3, 2 * n.k_f - 2 * n.k_a / 3),
    (1, 3, "even", "odd"): lambda n: (n.k_d, -2 * (n.k_g - n.k_d)),
    (1, 3, "odd", "odd"): lambda n: (n.k_c, 2 * (n.k_h - n.k_c)),
    (2, 3, "odd", "even"): lambda n: (n.k_b, 2 * (n.k_f - n.k_b)),
    (2, 3, "even", "even"): lambda n: (n.k_a / 3, 2 * (n.k_e - n.k_a)),
    (2, 3, "even", "odd"): lambda n: (n.k_c, 2 * (n.k_c - n.k_g)),
    (2, 3, "odd", "odd"): lambda n: (n.k_d, 2 * (n.k_h - n.k_d)),
}


def _parity(theta: float, tol: float) -> str | None:
    if _is_int_pi(theta, tol):
        return "even"
    if _is_odd_half_pi(theta, tol):
        return "odd"
    return None


def analytic_symmetry_m3(spec: WalkSpec, angle_tol: float = ANGLE_TOL) -> list[SymmetryWitness]:
    """Witnesses for S3,1 (two coin angles at multiples of pi/2, every tabulated
    pair/parity combination) and S3,2 (``k_b = k_c = k_d`` mod 2 pi)."""
    if spec.m != 3:
        raise WrongPeriod(f"expected m=3, got m={spec.m}")
    n = m3_notation(spec)
    par = [_parity(t, angle_tol) for t in spec.thetas]
    out = []
    for (i, j, pi_, pj), rule in M3_PARITY_CASES.items():
        if par[i - 1] == pi_ and par[j - 1] == pj:
            K, G = rule(n)
            out.append(_witness(spec, K, G, f"S3,1:i={i},j={j},{pi_}/{pj}"))
    if abs(wrap_angle(n.k_b - n.k_c)) <= angle_tol and abs(wrap_angle(n.k_c - n.k_d)) <= angle_tol:
        p11, p21 = spec.phi1s[0], spec.phi2s[0]
        out.append(_witness(spec, n.k_b, 2.0 * (p21 - p11), "S3,2"))
    return out


def analytic_symmetries(spec: WalkSpec, angle_tol: float = ANGLE_TOL) -> list[SymmetryWitness]:
    """Dispatch to the table for ``spec.m``; periods above 3 have no table."""
    if spec.m == 1:
        return [analytic_symmetry_m1(spec)]
    if spec.m == 2:
        return analytic_symmetry_m2(spec, angle_tol)
    if spec.m == 3:
        return analytic_symmetry_m3(spec, angle_tol)
    return []


class _ResidualField:
    """Residual as a function of (K, G) on a fixed k grid."""

    def __init__(self, spec: WalkSpec, n_k: int):
        self.spec = spec
        self.ks = k_grid(n_k)
        fwd = period_operator(spec, self.ks)
        self.c11 = np.conj(fwd.u11)
        self.c12 = np.conj(fwd.u12)

    def reflected(self, K):
        K = np.atleast_1d(np.asarray(K, dtype=float))
        op = period_operator(self.spec, 2.0 * K[:, None] - self.ks[None, :])
        return op.u11, op.u12

    def grid(self, Ks, Gs) -> np.ndarray:
        a11, a12 = self.reflected(Ks)
        r11 = np.abs(a11 - self.c11).max(axis=1)
        phase = np.exp(1j * np.asarray(Gs))
        # (nK, nG, nk) would be large; loop over G instead
        r12 = np.empty((len(Ks), len(Gs)))
        for j, e in enumerate(phase):
            r12[:, j] = np.abs(a12 - e * self.c12).max(axis=1)
        return np.maximum(r11[:, None], r12)

    def best_G(self, K: float) -> float:
        _, a12 = self.reflected(K)
        z = np.sum(a12[0] * np.conj(self.c12))
        return float(np.angle(z)) if abs(z) > 0 else 0.0

    def value(self, K: float, G: float) -> float:
        a11, a12 = self.reflected(K)
        r11 = np.abs(a11[0] - self.c11).max()
        r12 = np.abs(a12[0] - np.exp(1j * G) * self.c12).max()
        return float(max(r11, r12))

    def stacked(self, x) -> np.ndarray:
        a11, a12 = self.reflected(x[0])
        d11 = a11[0] - self.c11
        d12 = a12[0] - np.exp(1j * x[1]) * self.c12
        return np.concatenate([d11.real, d11.imag, d12.real, d12.imag])

    def polish(self, K: float, G: float) -> tuple[float, float]:
        sol = least_squares(self.stacked, x0=[K, G], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        return float(sol.x[0]), float(sol.x[1])

    def profile(self, K: float) -> float:
        return self.value(K, self.best_G(K))


def search_symmetry(
    spec: WalkSpec,
    n_K: int = 128,
    n_G: int = 128,
    n_k: int = 512,
    residual_cut: float = 1e-6,
    n_starts: int = 8,
) -> tuple[SymmetryWitness | None, float]:
    """Numerical (K, G) search.

    A coarse ``n_K x n_G`` scan over ``[-pi, pi)^2`` is followed by local
    refinement of the best cells: bounded Brent (golden section with
    parabolic steps) in ``K`` with ``G`` eliminated by its least-squares
    optimum, a Brent polish of ``G`` and a final Gauss-Newton pass on the
    smooth sum-of-squares form of the residual.  Returns the witness (or
    ``None``) and the best refined residual.
    """
    field = _ResidualField(spec, n_k)
    Ks = k_grid(n_K)
    Gs = k_grid(n_G)
    res = field.grid(Ks, Gs)
    hK = 2.0 * math.pi / n_K
    hG = 2.0 * math.pi / n_G

    flat_order = np.argsort(res, axis=None)
    starts = []
    for idx in flat_order:
        i, _ = np.unravel_index(idx, res.shape)
        if all(min(abs(i - s), n_K - abs(i - s)) > 1 for s in starts):
            starts.append(int(i))
        if len(starts) >= n_starts:
            break

    best = (math.inf, 0.0, 0.0)
    for i in starts:
        K0 = Ks[i]
        r = minimize_scalar(
            field.profile, bounds=(K0 - hK, K0 + hK), method="bounded", options={"xatol": 1e-13}
        )
        K = float(r.x)
        G0 = field.best_G(K)
        rg = minimize_scalar(
            lambda g: field.value(K, g),
            bounds=(G0 - hG, G0 + hG),
            method="bounded",
            options={"xatol": 1e-13},
        )
        G = float(rg.x) if rg.fun < field.value(K, G0) else G0
        val = field.value(K, G)
        Kp, Gp = field.polish(K, G)
        val_p = field.value(Kp, Gp)
        if val_p < val:
            K, G, val = Kp, Gp, val_p
        if val < best[0]:
            best = (val, K, G)

    val, K, G = best
    if val < residual_cut:
        return SymmetryWitness(wrap_angle(K), wrap_angle(G), val, "numeric-search"), val
    return None, val


def magnetization_antisymmetry_check(
    spec: WalkSpec, witness: SymmetryWitness, n_k: int = N_CHECK, edge_eps: float = EDGE_EPS
) -> tuple[float, float]:
    """``(max |M+(2K-k) + M+(k)|, max |w+(2K-k) - w+(k)|)`` over an ``n_k`` grid.

    Grid points within ``edge_eps`` of a band edge are skipped for the
    magnetization part.
    """
    ks = k_grid(n_k)
    kr = 2.0 * witness.K - ks
    w_res = float(np.max(np.abs(omega_plus(spec, kr) - omega_plus(spec, ks))))
    re = np.real(period_operator(spec, ks).u11)
    re_r = np.real(period_operator(spec, kr).u11)
    keep = (np.sqrt(np.clip(1 - re**2, 0, None)) >= edge_eps) & (
        np.sqrt(np.clip(1 - re_r**2, 0, None)) >= edge_eps
    )
    if not np.any(keep):
        return 0.0, w_res
    m_res = np.abs(
        eigenstate_magnetization(spec, kr[keep], +1, edge_eps)
        + eigenstate_magnetization(spec, ks[keep], +1, edge_eps)
    )
    return float(np.max(m_res)), w_res
