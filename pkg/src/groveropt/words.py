"""Gate words: ordered sequences of oracle/diffusion phase gates.

A gate word is the unit everything else trades in -- the plane simulator
applies words, the optimizers emit one word per accepted step, and the
schedule exporter serializes them.  Words are stored in application order:
the first entry is the first gate applied to the state.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, NamedTuple


class GateKind(str, enum.Enum):
    """The two gate families available to a Grover-type circuit."""

    ORACLE = "oracle"        # e^{i theta H}, one oracle query per gate
    DIFFUSION = "diffusion"  # e^{i theta |psi0><psi0|}


class Gate(NamedTuple):
    kind: GateKind
    theta: float


GateWord = tuple[Gate, ...]


def oracle(theta: float) -> Gate:
    return Gate(GateKind.ORACLE, theta)


def diffusion(theta: float) -> Gate:
    return Gate(GateKind.DIFFUSION, theta)


def oracle_count(word: Iterable[Gate]) -> int:
    """Number of oracle gates in a word, the query-complexity unit."""
    return sum(1 for g in word if g.kind is GateKind.ORACLE)


def concat(*words: GateWord) -> GateWord:
    """Concatenate words, earlier arguments applied first."""
    out: list[Gate] = []
    for w in words:
        out.extend(w)
    return tuple(out)


def wrap_angle(theta: float) -> float:
    """Reduce an angle to (-pi, pi] without losing IEEE exactness.

    math.remainder performs the reduction exactly; it returns values in
    [-pi, pi], so only the -pi endpoint needs remapping.
    """
    r = math.remainder(theta, 2.0 * math.pi)
    return math.pi if r <= -math.pi else r
