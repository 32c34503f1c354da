import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dtqw_ratchet.walk import CoinParams, WalkSpec

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


# Independent oracles: dense 2x2 matrices, numpy eig.


def step_matrix(theta, phi1, phi2, k):
    """Coin then shift at wave number ``k``, written out in full."""
    return np.array(
        [
            [np.exp(1j * (phi1 - k)) * np.cos(theta), np.exp(1j * (phi2 - k)) * np.sin(theta)],
            [-np.exp(-1j * (phi2 - k)) * np.sin(theta), np.exp(-1j * (phi1 - k)) * np.cos(theta)],
        ]
    )


def brute_period(spec: WalkSpec, k: float) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for c in spec.coins:
        u = step_matrix(c.theta, c.phi1, c.phi2, k) @ u
    return u


def brute_eig(spec: WalkSpec, k: float):
    """Eigenpairs ``(omega, M)`` of the period matrix, upper band first."""
    vals, vecs = np.linalg.eig(brute_period(spec, k))
    omegas = -np.angle(vals) / spec.m
    order = np.argsort(-omegas)
    out = []
    for j in order:
        v = vecs[:, j] / np.linalg.norm(vecs[:, j])
        out.append((omegas[j], abs(v[0]) ** 2 - abs(v[1]) ** 2))
    return out


def random_spec(rng: np.random.Generator, m: int) -> WalkSpec:
    draws = rng.uniform(-math.pi, math.pi, (m, 3))
    return WalkSpec(m, tuple(CoinParams(t, 0.0, p1, p2) for t, p1, p2 in draws))


angles = st.floats(-math.pi, math.pi, allow_nan=False, allow_infinity=False)


@st.composite
def specs(draw, m=None, max_m=3):
    m = draw(st.integers(1, max_m)) if m is None else m
    coins = tuple(
        CoinParams(draw(angles), 0.0, draw(angles), draw(angles)) for _ in range(m)
    )
    return WalkSpec(m, coins)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


M2_THETAS = (math.pi / 4, math.pi / 6)
M3_THETAS = (math.pi / 3, math.pi - 0.43, 0.43)


def m2_spec(delta=0.0):
    return WalkSpec.from_angles([*M2_THETAS], phi2=[delta, 0.0])


def m3_spec(phi11=0.0):
    return WalkSpec.from_angles(M3_THETAS, phi1=[phi11, 0.0, 0.0])


# Acceptance criteria report one line each at the end of the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
