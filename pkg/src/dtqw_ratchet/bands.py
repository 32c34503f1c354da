"""Two-band dispersion, eigenvectors and iso-frequency root sets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .bloch import period_operator
from .errors import BandEdgeDegeneracy, OutOfBand, UnresolvedRoot
from .walk import WalkSpec

__all__ = [
    "EDGE_EPS",
    "N_SCAN",
    "REFINE_TOL",
    "BandPoint",
    "Spinor",
    "IsoFrequencySet",
    "branch_sign",
    "re_u11",
    "omega_plus",
    "dispersion",
    "eigenvector",
    "eigenvectors",
    "sample_bands",
    "k_grid",
    "band_range",
    "IsoFrequencySolver",
    "iso_frequency_set",
]

EDGE_EPS = 1e-8
N_SCAN = 4096
REFINE_TOL = 1e-12


def branch_sign(branch) -> int:
    if branch in (1, "+", "plus"):
        return 1
    if branch in (-1, "-", "minus"):
        return -1
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


@dataclass(frozen=True)
class BandPoint:
    k: float
    omega_plus: float
    omega_minus: float


@dataclass(frozen=True)
class Spinor:
    psi_plus: complex
    psi_minus: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.psi_plus, self.psi_minus])

    @property
    def magnetization(self) -> float:
        return abs(self.psi_plus) ** 2 - abs(self.psi_minus) ** 2


@dataclass(frozen=True)
class IsoFrequencySet:
    """Wave numbers in ``[-pi, pi)`` whose band frequency equals ``omega``."""

    omega: float
    roots: tuple[float, ...]
    multiplicities: tuple[int, ...]
    branch: int

    @property
    def degeneracy(self) -> int:
        return sum(self.multiplicities)


def k_grid(n: int) -> np.ndarray:
    """Uniform grid over ``[-pi, pi)``."""
    return -math.pi + 2.0 * math.pi * np.arange(n) / n


def re_u11(spec: WalkSpec, k):
    return np.real(period_operator(spec, k).u11)


def omega_plus(spec: WalkSpec, k):
    """Upper band frequency, principal branch ``[0, pi/m]``."""
    return np.arccos(np.clip(re_u11(spec, k), -1.0, 1.0)) / spec.m


def dispersion(spec: WalkSpec, k) -> BandPoint:
    w = omega_plus(spec, k)
    if np.ndim(w) == 0:
        return BandPoint(float(k), float(w), -float(w))
    return BandPoint(np.asarray(k, dtype=float), w, -w)


def eigenvectors(spec: WalkSpec, k, branch=+1, edge_eps: float = EDGE_EPS):
    """Vectorized eigenvectors; returns ``(psi_plus, psi_minus, omega)`` arrays.

    The eigenvalue of the period operator is ``exp(-1j * m * omega)``.  Two
    algebraically equivalent column choices are computed and the better
    conditioned one is kept, which covers the ``u12 = 0`` corner.
    """
    sgn = branch_sign(branch)
    k = np.asarray(k, dtype=float)
    op = period_operator(spec, k)
    a = np.asarray(op.u11, dtype=complex)
    b = np.asarray(op.u12, dtype=complex)
    re = np.clip(a.real, -1.0, 1.0)
    s = sgn * np.sqrt(1.0 - re * re)
    if np.any(np.abs(s) < edge_eps):
        raise BandEdgeDegeneracy(
            f"|sin(m*omega)| < {edge_eps:g}: eigenvectors degenerate at the band edge"
        )
    x1, y1 = 1j * b, a.imag + s
    x2, y2 = 1j * (s - a.imag), b.conj()
    n1 = np.sqrt(np.abs(x1) ** 2 + np.abs(y1) ** 2)
    n2 = np.sqrt(np.abs(x2) ** 2 + np.abs(y2) ** 2)
    use1 = n1 >= n2
    x = np.where(use1, x1 / np.where(use1, n1, 1.0), x2 / np.where(use1, 1.0, n2))
    y = np.where(use1, y1 / np.where(use1, n1, 1.0), y2 / np.where(use1, 1.0, n2))
    omega = sgn * np.arccos(re) / spec.m
    return x, y, omega


def eigenvector(spec: WalkSpec, k: float, branch=+1, edge_eps: float = EDGE_EPS) -> Spinor:
    x, y, _ = eigenvectors(spec, k, branch, edge_eps)
    return Spinor(complex(x), complex(y))


def sample_bands(spec: WalkSpec, n_k: int) -> list[BandPoint]:
    if n_k < 2:
        raise ValueError("n_k must be >= 2")
    ks = k_grid(n_k)
    w = omega_plus(spec, ks)
    return [BandPoint(float(k), float(wp), -float(wp)) for k, wp in zip(ks, w)]


def _refine_extremum(f, lo: float, hi: float, sense: int) -> tuple[float, float]:
    # sense=+1 locates a minimum of f, sense=-1 a maximum
    res = minimize_scalar(
        lambda x: sense * float(f(x)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x), float(f(res.x))


def band_range(spec: WalkSpec, n_scan: int = N_SCAN) -> tuple[float, float]:
    """``(min, max)`` of Re u11 over the Brillouin zone."""
    ks = k_grid(n_scan)
    h = 2.0 * math.pi / n_scan
    vals = re_u11(spec, ks)
    f = lambda x: re_u11(spec, x)  # noqa: E731
    j = int(np.argmin(vals))
    _, lo = _refine_extremum(f, ks[j] - h, ks[j] + h, +1)
    j = int(np.argmax(vals))
    _, hi = _refine_extremum(f, ks[j] - h, ks[j] + h, -1)
    return min(lo, float(vals.min())), max(hi, float(vals.max()))


def _wrap_k(k: float) -> float:
    k = math.fmod(k + math.pi, 2.0 * math.pi)
    if k < 0.0:
        k += 2.0 * math.pi
    k -= math.pi
    return -math.pi if k >= math.pi else k


def _merge_tangent_pairs(pairs, f, h: float, touch: float) -> list[tuple[float, int]]:
    """Fuse two neighbouring simple roots into one double root when ``f``
    between them never leaves ``[-touch, touch]``.

    Rounding in ``cos(m omega)`` can turn a tangential touch into a pair of
    sign changes a few ``1e-8`` apart; such a pair is one double root.
    """
    pairs = sorted(pairs)
    n = len(pairs)
    if n < 2:
        return pairs
    merged = [False] * n
    out = []
    for i in range(n):
        j = (i + 1) % n
        if merged[i] or merged[j] or pairs[i][1] != 1 or pairs[j][1] != 1:
            continue
        a, b = pairs[i][0], pairs[j][0]
        gap = (b - a) % (2.0 * math.pi)
        if gap >= h:
            continue
        mid = a + 0.5 * gap
        sense = -1 if f(mid) > 0 else 1
        kx, fx = _refine_extremum(f, a, a + gap, sense)
        if abs(fx) <= touch:
            merged[i] = merged[j] = True
            out.append((_wrap_k(kx), 2))
    out.extend(p for p, used in zip(pairs, merged) if not used)
    return sorted(out)


def _bisect(f, lo: np.ndarray, hi: np.ndarray, width: float, max_iter: int = 200) -> np.ndarray:
    """Vectorized bisection of sign-changing brackets ``[lo, hi]``."""
    flo = f(lo)
    for _ in range(max_iter):
        if np.all(hi - lo <= width):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    else:
        raise UnresolvedRoot("bisection did not converge")
    return 0.5 * (lo + hi)


class IsoFrequencySolver:
    """Root finder for ``Re u11(k) = cos(m omega)`` that caches the scan grid.

    Simple roots come from sign changes on an ``n_scan`` grid refined by
    bisection (all requested frequencies are bisected together).  Tangential
    roots at band extrema are found by refining grid extrema of ``|f|`` and
    carry multiplicity 2.
    """

    def __init__(self, spec: WalkSpec, n_scan: int = N_SCAN, refine_tol: float = REFINE_TOL):
        self.spec = spec
        self.n_scan = n_scan
        self.refine_tol = refine_tol
        self.h = 2.0 * math.pi / n_scan
        self.ks = k_grid(n_scan)
        self.re = re_u11(spec, self.ks)
        self.re_min, self.re_max = band_range(spec, n_scan)
        self.flat = self.re_max - self.re_min < 1e-13
        self.touch = max(refine_tol, 1e-14)

    def _target(self, omega: float, sgn: int) -> float:
        m = self.spec.m
        w = sgn * omega
        if not (0.0 <= w <= math.pi / m):
            raise OutOfBand(f"omega={omega} is outside the principal range of branch {sgn:+d}")
        if self.flat:
            raise UnresolvedRoot("flat band: every wave number is degenerate at this frequency")
        target = math.cos(m * w)
        if target < self.re_min - self.touch or target > self.re_max + self.touch:
            raise OutOfBand(
                f"omega={omega} outside band [{math.acos(min(self.re_max, 1.0)) / m}, "
                f"{math.acos(max(self.re_min, -1.0)) / m}]"
            )
        return target

    def solve_many(self, omegas, branch=+1) -> list[IsoFrequencySet]:
        sgn = branch_sign(branch)
        spec, m, h, ks = self.spec, self.spec.m, self.h, self.ks
        width = self.refine_tol / (2.0 * m)
        targets = [self._target(float(w), sgn) for w in omegas]
        found: list[list[tuple[float, int]]] = [[] for _ in targets]

        br_lo, br_tgt, br_owner = [], [], []
        for i, target in enumerate(targets):
            fv = self.re - target
            fprev = np.roll(fv, 1)
            fnext = np.roll(fv, -1)
            for j in np.flatnonzero(fv == 0.0):
                if fprev[j] == 0.0 or fnext[j] == 0.0:
                    raise UnresolvedRoot(f"f vanishes on consecutive grid points near k={ks[j]}")
                found[i].append((float(ks[j]), 1 if fprev[j] * fnext[j] < 0 else 2))
            idx = np.flatnonzero(fv * fnext < 0.0)
            br_lo.append(ks[idx])
            br_tgt.append(np.full(idx.size, target))
            br_owner.append(np.full(idx.size, i))
            same = (np.sign(fprev) == np.sign(fv)) & (np.sign(fnext) == np.sign(fv)) & (fv != 0.0)
            local = (np.abs(fv) <= np.abs(fprev)) & (np.abs(fv) <= np.abs(fnext))
            for j in np.flatnonzero(same & local & (np.abs(fv) < (m * h) ** 2)):
                f = lambda x, t=target: re_u11(spec, x) - t  # noqa: E731
                sense = 1 if fv[j] > 0 else -1
                kx, fx = _refine_extremum(f, ks[j] - h, ks[j] + h, sense)
                if abs(fx) <= self.touch:
                    found[i].append((_wrap_k(kx), 2))
                elif np.sign(fx) != np.sign(fv[j]):
                    pair = _bisect(f, np.array([ks[j] - h, kx]), np.array([kx, ks[j] + h]), width)
                    found[i].extend((_wrap_k(x), 1) for x in pair)

        lo = np.concatenate(br_lo) if br_lo else np.zeros(0)
        if lo.size:
            tgt = np.concatenate(br_tgt)
            owner = np.concatenate(br_owner)
            r = _bisect(lambda x: re_u11(spec, x) - tgt, lo, lo + h, width)
            for x, i in zip(r, owner):
                found[i].append((_wrap_k(float(x)), 1))

        out = []
        tol = max(self.refine_tol, 4 * np.finfo(float).eps)
        for omega, target, pairs in zip(omegas, targets, found):
            pairs = _merge_tangent_pairs(pairs, lambda x, t=target: re_u11(spec, x) - t, h, self.touch)
            roots = tuple(p[0] for p in pairs)
            if roots:
                resid = np.max(np.abs(re_u11(spec, np.array(roots)) - target))
                if resid > tol:
                    raise UnresolvedRoot(
                        f"root residual {resid:.3g} exceeds tolerance {self.refine_tol:g}"
                    )
            out.append(IsoFrequencySet(float(omega), roots, tuple(p[1] for p in pairs), sgn))
        return out

    def solve(self, omega: float, branch=+1) -> IsoFrequencySet:
        return self.solve_many([omega], branch)[0]


def iso_frequency_set(
    spec: WalkSpec,
    omega: float,
    branch=+1,
    n_scan: int = N_SCAN,
    refine_tol: float = REFINE_TOL,
) -> IsoFrequencySet:
    """All ``k`` in ``[-pi, pi)`` with ``omega_branch(k) == omega``; see :class:`IsoFrequencySolver`."""
    return IsoFrequencySolver(spec, n_scan, refine_tol).solve(omega, branch)
