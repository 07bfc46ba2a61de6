"""Tests for the dense full-matrix reference implementation."""

import math

import numpy as np
import pytest

from groveropt import dense, plane
from groveropt.dense import (
    apply_gate_dense,
    apply_word_dense,
    build_world,
    decompose_gradient,
    frobenius_inner,
    hessian_action,
    initial_dense_state,
    riemannian_gradient,
    success_prob_dense,
    target_state,
    taylor_check,
)
from groveropt.retraction import five_factor_word
from groveropt.words import diffusion, oracle

from conftest import random_plane_word


def random_skew(size: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return 0.5 * (a - a.conj().T)


class TestBuildWorld:
    def test_small_projector(self):
        world = build_world(2, {3})
        assert np.array_equal(world.projector, np.diag([0, 0, 0, 1.0]).astype(complex))
        assert world.q0 == 0.25

    def test_rejects_bad_instances(self):
        with pytest.raises(ValueError):
            build_world(1, {0, 1})  # M = N
        with pytest.raises(ValueError):
            build_world(2, set())
        with pytest.raises(ValueError):
            build_world(2, {4})  # index out of range
        with pytest.raises(ValueError):
            build_world(11, {0})  # over the dense cap

    def test_projector_invariants(self):
        world = build_world(4, {5, 9, 12})
        h = world.projector
        assert np.array_equal(h, h.conj().T)
        assert np.max(np.abs(h @ h - h)) <= 1e-12
        assert np.trace(h).real == 3

    def test_basis_invariants(self):
        world = build_world(4, {5})
        x0, y0 = world.grad_basis_x, world.grad_basis_y
        assert np.max(np.abs(x0 + x0.conj().T)) <= 1e-15
        assert np.max(np.abs(y0 + y0.conj().T)) <= 1e-15
        assert abs(frobenius_inner(x0, y0)) <= 1e-12
        expected = math.sqrt(2 * world.q0 * (1 - world.q0))
        assert np.linalg.norm(x0) == pytest.approx(expected, abs=1e-12)
        assert np.linalg.norm(y0) == pytest.approx(expected, abs=1e-12)
        # direct evaluation of sqrt(2 * (1/16) * (15/16))
        assert np.linalg.norm(x0) == pytest.approx(0.3423265984407288, abs=1e-12)


class TestGateApplication:
    def test_zero_angle_is_identity(self, rng):
        world = build_world(3, {1, 6})
        s = dense.random_pure_state(8, rng)
        assert np.array_equal(apply_gate_dense(s, oracle(0.0), world), s)
        assert np.allclose(apply_gate_dense(s, diffusion(0.0), world), s, atol=1e-16)

    def test_oracle_pi_flips_marked_amplitude(self):
        world = build_world(2, {3})
        out = apply_gate_dense(initial_dense_state(world), oracle(math.pi), world)
        assert np.allclose(out, np.array([0.5, 0.5, 0.5, -0.5]), atol=1e-15)

    def test_grover_pair_reaches_target_at_n2(self):
        world = build_world(2, {3})
        s = initial_dense_state(world)
        s = apply_gate_dense(s, oracle(math.pi), world)
        s = apply_gate_dense(s, diffusion(math.pi), world)
        assert success_prob_dense(world, s) == pytest.approx(1.0, abs=1e-12)

    def test_unit_norm_preserved(self, rng):
        world = build_world(5, {7, 21})
        for _ in range(200):
            s = apply_word_dense(initial_dense_state(world), dense.random_word(rng), world)
            assert abs(np.linalg.norm(s) - 1.0) <= 1e-12


class TestGradient:
    def test_zero_at_target(self):
        world = build_world(3, {2})
        g = riemannian_gradient(world, target_state(world))
        assert np.max(np.abs(g)) <= 1e-12

    def test_zero_on_marked_orthogonal_state(self):
        world = build_world(3, {2})
        s = np.ones(8, dtype=complex)
        s[2] = 0.0
        s /= np.linalg.norm(s)
        g = riemannian_gradient(world, s)
        assert np.max(np.abs(g)) == 0.0

    def test_initial_gradient_is_basis_x(self):
        world = build_world(4, {3})
        g = riemannian_gradient(world, initial_dense_state(world))
        assert np.max(np.abs(g - world.grad_basis_x)) <= 1e-15


class TestHessian:
    def test_linear_in_omega(self):
        world = build_world(3, {1})
        s = initial_dense_state(world)
        zero = hessian_action(world, s, np.zeros((8, 8), dtype=complex))
        assert np.max(np.abs(zero)) == 0.0

    def test_gradient_is_eigenvector(self, rng):
        # L(g) = (1 - 2q) g for the gradient g at any pure state
        for n in (2, 4, 6):
            world = build_world(n, {1})
            for _ in range(20):
                s = dense.random_reachable_state(world, rng)
                g = riemannian_gradient(world, s)
                q = success_prob_dense(world, s)
                resid = np.linalg.norm(hessian_action(world, s, g) - (1 - 2 * q) * g)
                assert resid <= 1e-11 * max(1.0, np.linalg.norm(g))

    def test_eigenvalue_vanishes_at_half(self):
        # craft a plane state with q = 1/2 exactly: lambda = 1 - 2q = 0
        world = build_world(4, {3})
        u = world.marked_mask * world.psi0
        v = world.psi0 - u
        s = math.sqrt(0.5) * u / np.linalg.norm(u) + math.sqrt(0.5) * v / np.linalg.norm(v)
        q = success_prob_dense(world, s)
        assert q == pytest.approx(0.5, abs=1e-15)
        g = riemannian_gradient(world, s)
        assert np.max(np.abs(hessian_action(world, s, g))) <= 1e-11

    def test_self_adjoint(self, rng):
        world = build_world(4, {2, 7})
        s = dense.random_reachable_state(world, rng)
        for _ in range(100):
            omega = random_skew(16, rng)
            xi = random_skew(16, rng)
            lhs = frobenius_inner(xi, hessian_action(world, s, omega)).real
            rhs = frobenius_inner(hessian_action(world, s, xi), omega).real
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestDecomposition:
    def test_basis_vectors(self):
        world = build_world(3, {5})
        x, y, r = decompose_gradient(world, world.grad_basis_x)
        assert (x, y) == (pytest.approx(1.0, abs=1e-13), pytest.approx(0.0, abs=1e-13))
        assert r <= 1e-13

    def test_linear_combination(self):
        world = build_world(3, {5})
        g = 0.3 * world.grad_basis_x - 0.7 * world.grad_basis_y
        x, y, r = decompose_gradient(world, g)
        assert x == pytest.approx(0.3, abs=1e-12)
        assert y == pytest.approx(-0.7, abs=1e-12)
        assert r <= 1e-12

    def test_matches_plane_coefficients_on_mirrored_word(self, rng):
        world = build_world(4, {0})
        spec = plane.make_spec(4, 1)
        for _ in range(30):
            word = random_plane_word(rng, max_gates=5)
            s_dense = apply_word_dense(initial_dense_state(world), word, world)
            s_plane = plane.apply_word(plane.initial_state(spec), word)
            g = riemannian_gradient(world, s_dense)
            x, y, resid = decompose_gradient(world, g)
            c = plane.grad_coeffs(s_plane)
            assert resid <= 1e-11
            assert abs(x - c.x) <= 1e-11
            assert abs(y - c.y) <= 1e-11

    def test_reachable_states_stay_in_plane(self, rng):
        world = build_world(5, {11})
        for _ in range(50):
            s = dense.random_reachable_state(world, rng)
            assert dense.grover_plane_residual(world, s) <= 1e-11
            _, _, resid = decompose_gradient(world, riemannian_gradient(world, s))
            assert resid <= 1e-11


class TestGradientNormIdentities:
    def test_norms_and_orthogonality_at_reachable_states(self, rng):
        world = build_world(5, {3})
        for _ in range(30):
            s = dense.random_reachable_state(world, rng)
            q = success_prob_dense(world, s)
            x = riemannian_gradient(world, s)
            y = 1j * dense._commutator_with_projector(world, x)
            expected = math.sqrt(2 * q * (1 - q))
            assert abs(np.linalg.norm(x) - expected) <= 1e-11
            assert abs(np.linalg.norm(y) - expected) <= 1e-11
            assert abs(frobenius_inner(x, y)) <= 1e-11


class TestTaylor:
    def test_cubic_remainder_along_gradient_direction(self, rng):
        world = build_world(4, {9})
        done = 0
        while done < 10:
            s = dense.random_reachable_state(world, rng)
            g = riemannian_gradient(world, s)
            x, y, _ = decompose_gradient(world, g)
            if math.hypot(x, y) < 1e-3:
                continue
            _, r_big = taylor_check(world, s, (x, y), 1e-2)
            _, r_small = taylor_check(world, s, (x, y), 5e-3)
            if r_big < 1e-13:
                continue  # below rounding noise, ratio meaningless
            assert 4.8 <= r_big / r_small <= 11.2
            done += 1

    def test_zero_direction_gives_zero_residuals(self):
        world = build_world(3, {1})
        assert taylor_check(world, initial_dense_state(world), (0.0, 0.0), 1e-2) == (0.0, 0.0)

    def test_quadratic_decrease_at_maximizer(self):
        # at the target the gradient term vanishes and the cost bends down
        # with Hessian eigenvalue 1 - 2q = -1 along any plane direction
        world = build_world(4, {3})
        s = target_state(world)
        for direction in ((1.0, 0.0), (0.3, -0.8), (0.0, 1.0)):
            omega = direction[0] * world.grad_basis_x + direction[1] * world.grad_basis_y
            d2 = frobenius_inner(omega, hessian_action(world, s, omega)).real
            norm_sq = float(np.linalg.norm(omega)) ** 2
            assert d2 == pytest.approx(-norm_sq, rel=1e-10)
            for t in (1e-2, 5e-3):
                first, second = taylor_check(world, s, direction, t)
                f0 = success_prob_dense(world, s)
                moved = apply_word_dense(s.copy(), five_factor_word(t, *direction), world)
                assert success_prob_dense(world, moved) < f0  # strictly decreases
                assert second <= 60 * t**3  # cubic remainder at a critical point


class TestPlaneDenseEquivalence:
    def test_identical_words_give_identical_observables(self, rng):
        for n in (2, 3, 5, 6):
            world = build_world(n, {1} if n < 4 else {5, 2})
            spec = plane.make_spec(n, len(world.marked))
            s_dense = initial_dense_state(world)
            s_plane = plane.initial_state(spec)
            for _ in range(20):
                word = random_plane_word(rng, max_gates=6)
                s_dense = apply_word_dense(s_dense, word, world)
                s_plane = plane.apply_word(s_plane, word)
                x, y, q, _ = dense.plane_observables(world, s_dense)
                c = plane.grad_coeffs(s_plane)
                assert abs(q - c.q) <= 1e-12
                assert abs(x - c.x) <= 1e-11
                assert abs(y - c.y) <= 1e-11

    def test_drift_stays_within_budget_over_ten_thousand_gates(self, rng):
        # accumulated divergence between the two arithmetic paths must stay
        # inside the documented 1e-12 budget even on long gate sequences
        world = build_world(6, {11})
        spec = plane.make_spec(6, 1)
        s_dense = initial_dense_state(world)
        s_plane = plane.initial_state(spec)
        gates_applied = 0
        while gates_applied < 10_000:
            word = random_plane_word(rng, max_gates=20)
            gates_applied += len(word)
            s_dense = apply_word_dense(s_dense, word, world)
            s_plane = plane.apply_word(s_plane, word)
            x, y, q, _ = dense.plane_observables(world, s_dense)
            c = plane.grad_coeffs(s_plane)
            assert abs(q - c.q) <= 1e-12
            assert abs(x - c.x) <= 1e-11
            assert abs(y - c.y) <= 1e-11


class TestRetractionDerivativeAgainstDense:
    def test_plane_residual_matches_dense_finite_difference(self, rng):
        # the plane-level finite-difference residual of first_order_check is
        # the Hilbert-space norm; recomputing it densely from scratch must
        # give the same number
        from groveropt.retraction import first_order_check

        world = build_world(4, {6})
        spec = plane.make_spec(4, 1)
        for _ in range(10):
            word = random_plane_word(rng, max_gates=10)
            s_plane = plane.apply_word(plane.initial_state(spec), word)
            s_dense = apply_word_dense(initial_dense_state(world), word, world)
            c = plane.grad_coeffs(s_plane)
            if math.hypot(c.x, c.y) < 1e-6:
                continue
            h = 1e-3
            plane_residual = first_order_check(c.x, c.y, spec, h, state=s_plane)
            omega = c.x * world.grad_basis_x + c.y * world.grad_basis_y
            moved = apply_word_dense(s_dense, five_factor_word(h, c.x, c.y), world)
            dense_residual = float(
                np.linalg.norm((moved - s_dense) / h - omega @ s_dense)
            )
            assert abs(plane_residual - dense_residual) <= 1e-10 * max(1.0, dense_residual)
