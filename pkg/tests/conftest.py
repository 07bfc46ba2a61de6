"""Shared helpers for the test suite."""

import math

import numpy as np
import pytest

from groveropt.words import Gate, GateKind


def analytic_grover_q(q0: float, k: int) -> float:
    """Closed-form success probability sin^2((2k+1) * asin(sqrt(q0))).

    Independent oracle for the fixed-angle Grover baseline: after k
    oracle+diffusion pairs the plane angle advances by 2*theta0 per step
    from theta0, with sin(theta0) = sqrt(q0).
    """
    theta0 = math.asin(math.sqrt(q0))
    return math.sin((2 * k + 1) * theta0) ** 2


def random_plane_word(rng: np.random.Generator, max_gates: int = 20) -> tuple[Gate, ...]:
    """Random word with angles in (-pi, pi], up to max_gates gates."""
    length = int(rng.integers(1, max_gates + 1))
    return tuple(
        Gate(
            GateKind.ORACLE if rng.random() < 0.5 else GateKind.DIFFUSION,
            float(-rng.uniform(-math.pi, math.pi)),
        )
        for _ in range(length)
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
