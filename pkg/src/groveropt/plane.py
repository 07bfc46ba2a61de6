"""Exact 2x2 simulation of Grover-compatible circuits.

Every circuit built from oracle and diffusion gates keeps the state inside
the two-dimensional plane spanned by u = H|psi0> and v = (I-H)|psi0>, so an
n-qubit run reduces to tracking the pair of complex coordinates (alpha,
beta) of the state alpha*u + beta*v.  The basis is not orthonormal
(<u|u> = q0, <v|v> = 1-q0), which is why the diffusion gate's 2x2
representation is not a unitary array even though the underlying operator
is unitary: the conserved quantity is q0*|alpha|^2 + (1-q0)*|beta|^2 = 1.

All values here are immutable and all functions pure; twelve workers can
hammer the same OracleSpec without a lock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .words import Gate, GateKind

MAX_QUBITS = 62


def _cexp(theta: float) -> complex:
    """e^{i theta} via numpy's complex exp.

    Shared by the gate constructors, the simulator loop, and (through
    numpy) the dense reference path, so both paths see bit-identical gate
    entries.
    """
    return complex(np.exp(1j * theta))


@dataclass(frozen=True)
class OracleSpec:
    """An unstructured-search instance: n qubits, M marked items.

    q0 = M/2^n is the probability of hitting a marked item by uniform
    random guessing, and the success probability of the untouched initial
    state.  The degenerate cases M = 0 and M = N are rejected because the
    whole geometry collapses when q0 is 0 or 1.
    """

    n: int
    marked_count: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        if self.n > MAX_QUBITS:
            raise ValueError(f"n={self.n} exceeds the supported maximum {MAX_QUBITS}")
        if not 1 <= self.marked_count < 2**self.n:
            raise ValueError(
                f"marked count must satisfy 1 <= M < 2^n, got M={self.marked_count}, N={2**self.n}"
            )

    @property
    def size(self) -> int:
        return 2**self.n

    @property
    def q0(self) -> float:
        return self.marked_count / 2**self.n


def make_spec(n: int, marked_count: int) -> OracleSpec:
    """Validated constructor for a search instance."""
    return OracleSpec(n=n, marked_count=marked_count)


@dataclass(frozen=True)
class PlaneState:
    """Coordinates (alpha, beta) of the state alpha*u + beta*v."""

    alpha: complex
    beta: complex
    spec: OracleSpec

    def norm_residual(self) -> float:
        """Deviation of q0|alpha|^2 + (1-q0)|beta|^2 from 1."""
        q0 = self.spec.q0
        return abs(q0 * abs(self.alpha) ** 2 + (1 - q0) * abs(self.beta) ** 2 - 1.0)


def initial_state(spec: OracleSpec) -> PlaneState:
    """The uniform superposition: alpha = beta = 1."""
    return PlaneState(alpha=1.0 + 0.0j, beta=1.0 + 0.0j, spec=spec)


def e_h(theta: float) -> np.ndarray:
    """2x2 representation of the oracle gate: diag(e^{i theta}, 1)."""
    return np.array([[_cexp(theta), 0.0], [0.0, 1.0]], dtype=complex)


def e_psi0(theta: float, q0: float) -> np.ndarray:
    """2x2 representation of the diffusion gate in the (u, v) basis.

    Equals I + (e^{i theta} - 1) * [[q0, 1-q0], [q0, 1-q0]].  Not unitary
    as an array (the basis is not orthonormal); it preserves the weighted
    norm q0|alpha|^2 + (1-q0)|beta|^2 instead.
    """
    w = _cexp(theta) - 1.0
    return np.array(
        [[1.0 + w * q0, w * (1 - q0)], [w * q0, 1.0 + w * (1 - q0)]], dtype=complex
    )


def gate_matrix(gate: Gate, q0: float) -> np.ndarray:
    """The 2x2 matrix of a single gate."""
    if gate.kind is GateKind.ORACLE:
        return e_h(gate.theta)
    return e_psi0(gate.theta, q0)


def apply_word(state: PlaneState, word: Iterable[Gate]) -> PlaneState:
    """Apply a gate word to a state, first entry first.

    Equivalent to multiplying (alpha, beta) by the product of the word's
    gate matrices folded from the right; written out entrywise so long
    schedules stay cheap.
    """
    a = complex(state.alpha)
    b = complex(state.beta)
    q0 = state.spec.q0
    for kind, theta in word:
        phase = _cexp(theta)
        if kind is GateKind.ORACLE:
            a = phase * a
        else:
            w = phase - 1.0
            a, b = (1.0 + w * q0) * a + w * (1 - q0) * b, w * q0 * a + (1.0 + w * (1 - q0)) * b
    return PlaneState(alpha=a, beta=b, spec=state.spec)


def success_prob(state: PlaneState) -> float:
    """Probability q = q0 * |alpha|^2 of measuring a marked item.

    Clamped to [0, 1]: rounding can push the raw value a few ulps past 1,
    and downstream sqrt(2q(1-q)) must never see a negative argument.
    """
    q = state.spec.q0 * abs(state.alpha) ** 2
    return min(max(q, 0.0), 1.0)


class GradCoeffs(NamedTuple):
    """Plane coordinates (x, y) of the Riemannian gradient, plus q.

    x + iy = alpha * conj(beta); the gradient of the success probability
    at this state equals x*X0 + y*Y0 in the fixed skew-Hermitian basis
    that the dense oracle constructs explicitly.
    """

    x: float
    y: float
    q: float


def grad_coeffs(state: PlaneState) -> GradCoeffs:
    z = state.alpha * complex(state.beta).conjugate()
    return GradCoeffs(x=z.real, y=z.imag, q=success_prob(state))


def grad_norm(q: float) -> float:
    """Frobenius norm sqrt(2 q (1-q)) of the plane gradient at value q."""
    return math.sqrt(2.0 * q * (1.0 - q))
