"""Full N x N reference implementation of the search geometry.

Everything the 2x2 plane simulator takes for granted -- the invariant
plane, the gradient decomposition, the Hessian eigenvector identity, the
retraction's Taylor behavior -- is computable here by brute force on
explicit matrices, for small qubit counts.  This module exists to verify
the fast path, not to run experiments: it is capped at n <= 10 where the
O(N^3) commutators stay subsecond.

Gates are applied through their rank-structured closed forms (the oracle
rephases marked amplitudes, the diffusion shifts along |psi0>), never a
general matrix exponential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .plane import OracleSpec, make_spec
from .retraction import five_factor_word
from .words import Gate, GateKind, GateWord

MAX_DENSE_QUBITS = 10


@dataclass(frozen=True)
class DenseWorld:
    """Explicit matrices for one search instance.

    projector is the diagonal 0/1 projector onto the marked subspace;
    grad_basis_x = [projector, psi0_proj] and grad_basis_y = i[projector,
    grad_basis_x] span the invariant gradient plane.  Both basis matrices
    have squared Frobenius norm 2*q0*(1-q0).
    """

    spec: OracleSpec
    marked: frozenset[int]
    projector: np.ndarray      # (N, N) complex
    marked_mask: np.ndarray    # (N,) float 0/1 diagonal of the projector
    psi0: np.ndarray           # (N,) uniform superposition
    grad_basis_x: np.ndarray   # (N, N) skew-Hermitian
    grad_basis_y: np.ndarray   # (N, N) skew-Hermitian
    basis_norm_sq: float       # ||X0||_F^2 = ||Y0||_F^2 = 2 q0 (1 - q0)

    @property
    def size(self) -> int:
        return self.spec.size

    @property
    def q0(self) -> float:
        return self.spec.q0


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Tr(a^dagger b) without forming the product matrix."""
    return complex(np.sum(a.conj() * b))


def build_world(n: int, marked: Iterable[int]) -> DenseWorld:
    """Construct the explicit matrices for n qubits and a marked index set.

    Rejects n > 10 (time/memory guard) and empty or full marked sets (the
    geometry degenerates when q0 hits 0 or 1).
    """
    if n > MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense verification is capped at n={MAX_DENSE_QUBITS}, got n={n}"
        )
    marked_set = frozenset(int(i) for i in marked)
    size = 2**n
    if any(not 0 <= i < size for i in marked_set):
        raise ValueError(f"marked indices must lie in [0, {size})")
    spec = make_spec(n, len(marked_set))  # validates 1 <= M < N and n >= 1

    mask = np.zeros(size, dtype=float)
    mask[sorted(marked_set)] = 1.0
    projector = np.diag(mask).astype(complex)
    psi0 = np.full(size, 1.0 / math.sqrt(size), dtype=complex)
    psi0_proj = np.outer(psi0, psi0.conj())
    x0 = projector @ psi0_proj - psi0_proj @ projector
    y0 = 1j * (projector @ x0 - x0 @ projector)
    return DenseWorld(
        spec=spec,
        marked=marked_set,
        projector=projector,
        marked_mask=mask,
        psi0=psi0,
        grad_basis_x=x0,
        grad_basis_y=y0,
        basis_norm_sq=2.0 * spec.q0 * (1.0 - spec.q0),
    )


def initial_dense_state(world: DenseWorld) -> np.ndarray:
    return world.psi0.copy()


def target_state(world: DenseWorld) -> np.ndarray:
    """The normalized projection of |psi0> onto the marked subspace."""
    t = world.marked_mask * world.psi0
    return t / np.linalg.norm(t)


def apply_gate_dense(state: np.ndarray, gate: Gate, world: DenseWorld) -> np.ndarray:
    """Apply one gate via its closed form.

    oracle(theta): adds (e^{i theta} - 1) times the marked component;
    diffusion(theta): adds (e^{i theta} - 1) <psi0|state> |psi0>.
    """
    w = np.exp(1j * gate.theta) - 1.0
    if gate.kind is GateKind.ORACLE:
        return state + w * (world.marked_mask * state)
    return state + w * np.vdot(world.psi0, state) * world.psi0


def apply_word_dense(state: np.ndarray, word: GateWord, world: DenseWorld) -> np.ndarray:
    for gate in word:
        state = apply_gate_dense(state, gate, world)
    return state


def success_prob_dense(world: DenseWorld, state: np.ndarray) -> float:
    """<state| H |state> = total probability mass on marked indices."""
    return float(np.sum(world.marked_mask * np.abs(state) ** 2))


def _commutator_with_projector(world: DenseWorld, a: np.ndarray) -> np.ndarray:
    """[H, a] exploiting that H is diagonal 0/1: row/column masking."""
    mask = world.marked_mask
    return mask[:, None] * a - a * mask[None, :]


def riemannian_gradient(world: DenseWorld, state: np.ndarray) -> np.ndarray:
    """Skew-Hermitian gradient [H, |state><state|]."""
    psi = np.outer(state, state.conj())
    return _commutator_with_projector(world, psi)


def hessian_action(world: DenseWorld, state: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Self-adjoint Hessian operator applied to a skew-Hermitian omega.

    L(omega) = ([H, [omega, psi]] + [[H, omega], psi]) / 2 with psi the
    pure-state projector of the current state.
    """
    psi = np.outer(state, state.conj())
    inner1 = omega @ psi - psi @ omega
    inner2 = _commutator_with_projector(world, omega)
    return 0.5 * (
        _commutator_with_projector(world, inner1) + (inner2 @ psi - psi @ inner2)
    )


def decompose_gradient(
    world: DenseWorld, grad: np.ndarray
) -> tuple[float, float, float]:
    """Coordinates (x, y) of grad in the fixed basis, plus the residual.

    x and y are real Frobenius projections onto the equal-norm orthogonal
    basis pair; the residual ||grad - x*X0 - y*Y0||_F vanishes (to rounding)
    for any state reached by a Grover-compatible word.
    """
    x = frobenius_inner(world.grad_basis_x, grad).real / world.basis_norm_sq
    y = frobenius_inner(world.grad_basis_y, grad).real / world.basis_norm_sq
    residual = float(
        np.linalg.norm(grad - x * world.grad_basis_x - y * world.grad_basis_y)
    )
    return x, y, residual


def plane_observables(world: DenseWorld, state: np.ndarray) -> tuple[float, float, float, float]:
    """(x, y, q, subspace residual) measured from the dense state.

    This is the dense mirror of the plane simulator's grad_coeffs, used to
    cross-validate the two paths on identical gate sequences.
    """
    q = success_prob_dense(world, state)
    x, y, residual = decompose_gradient(world, riemannian_gradient(world, state))
    return x, y, q, residual


def grover_plane_residual(world: DenseWorld, state: np.ndarray) -> float:
    """Distance from the state to span{|psi0>, H|psi0>}."""
    u = world.marked_mask * world.psi0
    # orthonormalize {psi0, u}
    e1 = world.psi0
    w = u - np.vdot(e1, u) * e1
    wn = np.linalg.norm(w)
    proj = np.vdot(e1, state) * e1
    if wn > 0:
        e2 = w / wn
        proj = proj + np.vdot(e2, state) * e2
    return float(np.linalg.norm(state - proj))


def taylor_check(
    world: DenseWorld,
    state: np.ndarray,
    direction: tuple[float, float],
    t: float,
) -> tuple[float, float]:
    """Residuals of the first- and second-order expansions along the curve.

    Evaluates the cost along the five-factor curve at scale t for the given
    plane direction (x, y) and subtracts the predicted gradient term, then
    additionally the Hessian term.  The second residual decays as t^3 when
    (x, y) is the state's own gradient direction (and at critical points
    for any direction); for unrelated directions the curve is only a
    first-order retraction and the decay drops to t^2.
    """
    x, y = direction
    if x == 0.0 and y == 0.0:
        return 0.0, 0.0
    omega = x * world.grad_basis_x + y * world.grad_basis_y
    grad = riemannian_gradient(world, state)
    d1 = frobenius_inner(grad, omega).real
    d2 = frobenius_inner(omega, hessian_action(world, state, omega)).real

    f0 = success_prob_dense(world, state)
    moved = apply_word_dense(state.copy(), five_factor_word(t, x, y), world)
    ft = success_prob_dense(world, moved)

    first = abs(ft - f0 - t * d1)
    second = abs(ft - f0 - t * d1 - 0.5 * t * t * d2)
    return first, second


# --- seeded sampling used by the verification suites ---


def random_word(
    rng: np.random.Generator, min_gates: int = 1, max_gates: int = 30
) -> GateWord:
    """Random Grover-compatible word: uniform kinds, angles in (-pi, pi]."""
    length = int(rng.integers(min_gates, max_gates + 1))
    gates = []
    for _ in range(length):
        kind = GateKind.ORACLE if rng.random() < 0.5 else GateKind.DIFFUSION
        theta = float(-rng.uniform(-math.pi, math.pi))  # negate: open end at -pi
        gates.append(Gate(kind, theta))
    return tuple(gates)


def random_reachable_state(world: DenseWorld, rng: np.random.Generator) -> np.ndarray:
    """A state reached from |psi0> by 1..30 random gates."""
    return apply_word_dense(initial_dense_state(world), random_word(rng), world)


def random_pure_state(size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like random unit vector from normalized complex normals."""
    v = rng.normal(size=size) + 1j * rng.normal(size=size)
    return v / np.linalg.norm(v)
