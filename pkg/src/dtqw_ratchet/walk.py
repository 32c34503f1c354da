"""Parameterization of m-periodic discrete-time quantum walks.

A walk is a repeating sequence of ``m`` coins.  Each coin is fixed by four
angles ``(theta, phi, phi1, phi2)``; ``phi`` is a global phase that only
shifts quasi-energies and is stripped by :func:`canonical_phase_reduction`
before any spectral computation.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyPeriod, LengthMismatch, NonFiniteAngle, WrongPeriod

__all__ = [
    "wrap_angle",
    "CoinParams",
    "WalkSpec",
    "MThreeNotation",
    "validate_walk_spec",
    "canonical_phase_reduction",
    "m3_notation",
]

TWO_PI = 2.0 * math.pi


def wrap_angle(x: float) -> float:
    """Reduce ``x`` into ``[-pi, pi)``; values already inside are returned untouched."""
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteAngle(f"angle {x!r} is not finite")
    if -math.pi <= x < math.pi:
        return x
    y = math.fmod(x + math.pi, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    return y - math.pi


@dataclass(frozen=True)
class CoinParams:
    """Angles of a single coin step, stored wrapped to ``[-pi, pi)``."""

    theta: float
    phi: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        for name in ("theta", "phi", "phi1", "phi2"):
            object.__setattr__(self, name, wrap_angle(getattr(self, name)))

    def matrix(self, k: float = 0.0) -> np.ndarray:
        """Full 2x2 single-step Bloch matrix (shift included), global phase kept."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.exp(1j * self.phi) * np.array(
            [
                [np.exp(1j * (self.phi1 - k)) * c, np.exp(1j * (self.phi2 - k)) * s],
                [-np.exp(-1j * (self.phi2 - k)) * s, np.exp(-1j * (self.phi1 - k)) * c],
            ]
        )


def _as_coin(obj) -> CoinParams:
    if isinstance(obj, CoinParams):
        return obj
    if isinstance(obj, Mapping):
        return CoinParams(**obj)
    return CoinParams(*obj)


@dataclass(frozen=True)
class WalkSpec:
    """Period ``m`` and the ordered coins; coin ``0`` is applied first."""

    m: int
    coins: tuple[CoinParams, ...]

    def __post_init__(self):
        m = self.m
        if isinstance(m, bool) or int(m) != m:
            raise LengthMismatch(f"period m must be an integer, got {m!r}")
        m = int(m)
        if m < 1:
            raise EmptyPeriod(f"period m must be >= 1, got {m}")
        coins = tuple(_as_coin(c) for c in self.coins)
        if len(coins) != m:
            raise LengthMismatch(f"period m={m} but {len(coins)} coin(s) given")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coins", coins)

    @classmethod
    def from_angles(
        cls,
        thetas: Sequence[float],
        phi1: Sequence[float] | None = None,
        phi2: Sequence[float] | None = None,
        phi: Sequence[float] | None = None,
    ) -> "WalkSpec":
        m = len(thetas)
        zeros = [0.0] * m
        phi1 = zeros if phi1 is None else phi1
        phi2 = zeros if phi2 is None else phi2
        phi = zeros if phi is None else phi
        if not (len(phi1) == len(phi2) == len(phi) == m):
            raise LengthMismatch("angle sequences differ in length")
        coins = [CoinParams(t, p, a, b) for t, p, a, b in zip(thetas, phi, phi1, phi2)]
        return cls(m, tuple(coins))

    @property
    def thetas(self) -> np.ndarray:
        return np.array([c.theta for c in self.coins])

    @property
    def phi1s(self) -> np.ndarray:
        return np.array([c.phi1 for c in self.coins])

    @property
    def phi2s(self) -> np.ndarray:
        return np.array([c.phi2 for c in self.coins])

    @property
    def is_reduced(self) -> bool:
        return all(c.phi == 0.0 for c in self.coins)


def validate_walk_spec(m, coins: Iterable | None = None) -> WalkSpec:
    """Build a canonical :class:`WalkSpec`.

    Accepts either an existing spec (returned re-validated, so the call is
    idempotent), a mapping with ``m`` and ``coins`` keys, or ``m`` plus a
    sequence of coins.  Coins may be :class:`CoinParams`, mappings or tuples
    ``(theta, phi, phi1, phi2)``.
    """
    if isinstance(m, WalkSpec):
        return WalkSpec(m.m, m.coins)
    if isinstance(m, Mapping):
        m, coins = m.get("m"), m.get("coins", ())
    if m is None:
        raise EmptyPeriod("period m is missing")
    return WalkSpec(m, tuple(coins or ()))


def canonical_phase_reduction(spec: WalkSpec) -> tuple[WalkSpec, float]:
    """Strip the global phases; return the reduced spec and the wrapped total phase.

    The unreduced period operator equals ``exp(1j * total_phase)`` times the
    reduced one, so quasi-energies shift by ``-total_phase / m``.
    """
    total = math.fsum(c.phi for c in spec.coins)
    reduced = WalkSpec(spec.m, tuple(replace(c, phi=0.0) for c in spec.coins))
    return reduced, wrap_angle(total)


@dataclass(frozen=True)
class MThreeNotation:
    k_a: float
    k_b: float
    k_c: float
    k_d: float
    k_e: float
    k_f: float
    k_g: float
    k_h: float


def m3_notation(spec: WalkSpec) -> MThreeNotation:
    """Phase combinations entering the closed-form three-step operator.

    Values are returned unwrapped (plain sums of the stored angles) so that
    the linear identities between them hold exactly; wrap them with
    :func:`wrap_angle` when a canonical value is needed.
    """
    if spec.m != 3:
        raise WrongPeriod(f"m3_notation needs m=3, got m={spec.m}")
    a1, a2, a3 = spec.phi1s
    b1, b2, b3 = spec.phi2s
    k_a = a1 + a2 + a3
    k_b = a3 - b1 + b2
    k_c = a2 + b1 - b3
    k_d = a1 - b2 + b3
    shift = b1 - a1
    return MThreeNotation(
        k_a=k_a,
        k_b=k_b,
        k_c=k_c,
        k_d=k_d,
        k_e=k_a + shift,
        k_f=k_b + shift,
        k_g=k_c - shift,
        k_h=k_d + shift,
    )
