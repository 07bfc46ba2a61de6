"""Five-factor retraction: compile a tangent direction into a gate word.

Given plane gradient coordinates (x, y) and a scale t, this builds the
five-gate word

    [oracle(-a2), diffusion(t*b2), oracle(-pi), diffusion(t*b1), oracle(a1)]

with a1 = A + pi/2, a2 = A - pi/2, b1 = -R/2, b2 = R/2, where A = atan2(y, x)
and R = hypot(x, y).  At t = 0 the word collapses to the identity, and its
first derivative in t reproduces the tangent direction x*X0 + y*Y0 exactly,
so it is a valid retraction that costs three oracle queries per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import plane
from .words import Gate, GateKind, GateWord, diffusion, oracle

# re-exported here because schedules are built from retraction output
__all__ = [
    "DegenerateDirectionError",
    "FiveFactorParams",
    "five_factor_params",
    "five_factor_word",
    "first_order_check",
    "Gate",
    "GateKind",
    "GateWord",
]

_MIN_DIRECTION_NORM = 1e-300


class DegenerateDirectionError(ValueError):
    """Raised when the requested direction (x, y) is numerically zero."""


@dataclass(frozen=True)
class FiveFactorParams:
    """Angle parameters of the five-factor word for a direction (x, y)."""

    a1: float
    a2: float
    b1: float
    b2: float
    direction_angle: float  # A = atan2(y, x)
    direction_norm: float   # R = hypot(x, y)


def five_factor_params(x: float, y: float) -> FiveFactorParams:
    """Angles for direction (x, y); rejects a vanished direction.

    A vanished gradient means the caller should have stopped iterating, so
    this fails loudly instead of emitting a nonsense word.
    """
    r = math.hypot(x, y)
    if not r >= _MIN_DIRECTION_NORM:
        raise DegenerateDirectionError(
            f"direction ({x!r}, {y!r}) is numerically zero; cannot build a retraction word"
        )
    a = math.atan2(y, x)
    return FiveFactorParams(
        a1=a + math.pi / 2,
        a2=a - math.pi / 2,
        b1=-r / 2,
        b2=r / 2,
        direction_angle=a,
        direction_norm=r,
    )


def five_factor_word(t: float, x: float, y: float) -> GateWord:
    """The five-gate word realizing a step of scale t along (x, y).

    Application order (first gate first); the middle gate is emitted as
    oracle(-pi) exactly, keeping the word at three oracle queries.
    """
    p = five_factor_params(x, y)
    return (
        oracle(-p.a2),
        diffusion(t * p.b2),
        oracle(-math.pi),
        diffusion(t * p.b1),
        oracle(p.a1),
    )


def _direction_action(
    x: float, y: float, q0: float, state: plane.PlaneState
) -> tuple[complex, complex]:
    """(alpha, beta) image of the state under the generator x*X0 + y*Y0.

    In the (u, v) basis the generator acts as the matrix
    [[0, (x+iy)(1-q0)], [(-x+iy) q0, 0]].
    """
    c = complex(x, y)
    return (
        c * (1 - q0) * state.beta,
        (-c.conjugate()) * q0 * state.alpha,
    )


def first_order_check(
    x: float,
    y: float,
    spec: plane.OracleSpec,
    h: float,
    state: plane.PlaneState | None = None,
) -> float:
    """Finite-difference residual of the retraction's defining property.

    Measures || (gamma(h) - gamma(0))/h - eta || on the state the curve is
    anchored at (the initial state unless one is supplied), where eta is
    the action of the generator x*X0 + y*Y0.  The norm is the true Hilbert
    norm, i.e. the q0-weighted norm of plane coordinates.  For a valid
    retraction the residual is O(h).
    """
    if state is None:
        state = plane.initial_state(spec)
    q0 = spec.q0
    moved = plane.apply_word(state, five_factor_word(h, x, y))
    da = (moved.alpha - state.alpha) / h
    db = (moved.beta - state.beta) / h
    ga, gb = _direction_action(x, y, q0, state)
    ra = da - ga
    rb = db - gb
    return math.sqrt(q0 * abs(ra) ** 2 + (1 - q0) * abs(rb) ** 2)
