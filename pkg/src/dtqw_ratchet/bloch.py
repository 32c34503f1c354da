"""Momentum-space (Bloch) operators of periodic walks.

Every single-step operator, and therefore every period operator, lies in
SU(2) once the global phase is stripped, so only the first row
``(u11, u12)`` is stored.  The period operator is the ordered product
``U_m ... U_2 U_1``: the first coin of the sequence acts first.

All functions broadcast over ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedPeriod
from .walk import CoinParams, WalkSpec, m3_notation

__all__ = [
    "BlochOperator",
    "single_step_operator",
    "period_operator",
    "closed_form_u11",
    "closed_form_u12",
]


@dataclass(frozen=True)
class BlochOperator:
    """SU(2) matrix ``[[u11, u12], [-conj(u12), conj(u11)]]``.

    ``u11`` and ``u12`` are complex scalars or equally shaped arrays.
    """

    u11: complex | np.ndarray
    u12: complex | np.ndarray

    def matrix(self) -> np.ndarray:
        """Completed matrix with shape ``(..., 2, 2)``."""
        a = np.asarray(self.u11, dtype=complex)
        b = np.asarray(self.u12, dtype=complex)
        row0 = np.stack([a, b], axis=-1)
        row1 = np.stack([-b.conj(), a.conj()], axis=-1)
        return np.stack([row0, row1], axis=-2)

    def __matmul__(self, other: "BlochOperator") -> "BlochOperator":
        a2, b2 = self.u11, self.u12
        a1, b1 = other.u11, other.u12
        return BlochOperator(a2 * a1 - b2 * np.conj(b1), a2 * b1 + b2 * np.conj(a1))

    def det_residual(self):
        return np.abs(np.abs(self.u11) ** 2 + np.abs(self.u12) ** 2 - 1.0)


def single_step_operator(coin: CoinParams, k) -> BlochOperator:
    """Coin followed by shift at wave number ``k``; the global phase ``coin.phi`` is ignored."""
    k = np.asarray(k, dtype=float)
    u11 = np.exp(1j * (coin.phi1 - k)) * np.cos(coin.theta)
    u12 = np.exp(1j * (coin.phi2 - k)) * np.sin(coin.theta)
    return BlochOperator(u11, u12)


def period_operator(spec: WalkSpec, k) -> BlochOperator:
    op = single_step_operator(spec.coins[0], k)
    for coin in spec.coins[1:]:
        op = single_step_operator(coin, k) @ op
    return op


def _check_closed_form(spec: WalkSpec):
    if spec.m > 3:
        raise UnsupportedPeriod(
            f"closed forms exist for m <= 3 only (got m={spec.m}); use period_operator"
        )


def closed_form_u11(spec: WalkSpec, k):
    _check_closed_form(spec)
    k = np.asarray(k, dtype=float)
    c, s = np.cos(spec.thetas), np.sin(spec.thetas)
    p1, p2 = spec.phi1s, spec.phi2s
    if spec.m == 1:
        return np.exp(1j * (p1[0] - k)) * c[0]
    if spec.m == 2:
        return (
            c[0] * c[1] * np.exp(-1j * (2 * k - p1[0] - p1[1]))
            - s[0] * s[1] * np.exp(1j * (p2[1] - p2[0]))
        )
    n = m3_notation(spec)
    return (
        c[0] * c[1] * c[2] * np.exp(1j * (n.k_a - 3 * k))
        - s[0] * s[1] * c[2] * np.exp(1j * (n.k_b - k))
        - s[0] * c[1] * s[2] * np.exp(1j * (k - n.k_c))
        - c[0] * s[1] * s[2] * np.exp(1j * (n.k_d - k))
    )


def closed_form_u12(spec: WalkSpec, k):
    _check_closed_form(spec)
    k = np.asarray(k, dtype=float)
    c, s = np.cos(spec.thetas), np.sin(spec.thetas)
    p1, p2 = spec.phi1s, spec.phi2s
    if spec.m == 1:
        return np.exp(1j * (p2[0] - k)) * s[0]
    if spec.m == 2:
        return (
            s[0] * c[1] * np.exp(-1j * (2 * k - p1[1] - p2[0]))
            + c[0] * s[1] * np.exp(-1j * (p1[0] - p2[1]))
        )
    n = m3_notation(spec)
    return (
        s[0] * c[1] * c[2] * np.exp(1j * (n.k_e - 3 * k))
        + c[0] * s[1] * c[2] * np.exp(1j * (n.k_f - k))
        + c[0] * c[1] * s[2] * np.exp(1j * (k - n.k_g))
        - s[0] * s[1] * s[2] * np.exp(1j * (n.k_h - k))
    )
