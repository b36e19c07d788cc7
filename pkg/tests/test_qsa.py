import numpy as np
import pytest

from fitkit.qsa import (StateTrajectory, evolve, generator_residuals,
                        qsa_monotone, qsa_multitone, schrodinger_step)


def exact_scalar_trajectory(omega, dt, steps, psi0=None, d=2):
    """Oracle: closed-form evolution under a scalar generator."""
    if psi0 is None:
        psi0 = np.ones(d, dtype=np.complex128) / np.sqrt(d)
    t = np.arange(steps + 1) * dt
    states = np.exp(-1j * omega * t)[:, None] * psi0[None, :]
    return StateTrajectory(states, dt)


def exact_diagonal_trajectory(omegas, dt, steps):
    """Oracle: closed-form evolution under a diagonal generator."""
    d = len(omegas)
    psi0 = np.ones(d, dtype=np.complex128) / np.sqrt(d)
    t = np.arange(steps + 1) * dt
    states = np.exp(-1j * np.outer(t, omegas)) * psi0[None, :]
    return StateTrajectory(states, dt)


class TestStateTrajectory:
    def test_requires_unit_norm(self):
        bad = np.ones((4, 2), dtype=np.complex128)
        with pytest.raises(ValueError):
            StateTrajectory(bad, 1e-3)

    def test_requires_three_states(self):
        states = np.tile([1.0 + 0j, 0.0], (2, 1))
        with pytest.raises(ValueError):
            StateTrajectory(states, 1e-3)


class TestSchrodingerStep:
    def test_identity_evolution(self):
        psi = np.array([1.0, 0.0], dtype=np.complex128)
        out = schrodinger_step(psi, np.zeros((2, 2)), 1e-3)
        assert np.allclose(out, psi)

    def test_zero_step(self):
        psi = np.array([0.6, 0.8j], dtype=np.complex128)
        assert np.array_equal(schrodinger_step(psi, np.eye(2), 0.0), psi)

    def test_phase_rotation_matches_exact_solution(self):
        omega = 2 * np.pi * 5.0
        dt = 1e-5
        psi = np.array([1.0, 0.0], dtype=np.complex128)
        stepped = schrodinger_step(psi, omega * np.eye(2), dt)
        exact = np.exp(-1j * omega * dt) * psi
        # first-order step agrees with the closed form to O((omega*dt)^2)
        assert np.max(np.abs(stepped - exact)) < (omega * dt) ** 2

    def test_renormalizes(self):
        psi = np.array([1.0, 0.0], dtype=np.complex128)
        out = schrodinger_step(psi, 100.0 * np.eye(2), 1e-2)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            schrodinger_step(np.ones(3, dtype=np.complex128), np.eye(2), 1e-3)


class TestMonotone:
    def test_recovers_constant_frequency_within_1pct(self):
        omega = 2 * np.pi * 10.0
        traj = exact_scalar_trajectory(omega, 1e-4, 200)
        est = qsa_monotone(traj)
        assert np.all(np.abs(est.values - omega) / omega < 0.01)

    def test_stationary_trajectory_gives_zero(self):
        psi0 = np.array([0.6, 0.8], dtype=np.complex128)
        traj = StateTrajectory(np.tile(psi0, (5, 1)), 1e-3)
        est = qsa_monotone(traj)
        assert np.allclose(est.values, 0.0)

    def test_imag_residual_is_small_for_unitary_motion(self):
        traj = exact_scalar_trajectory(2 * np.pi * 3.0, 1e-4, 50)
        est = qsa_monotone(traj)
        assert np.max(np.abs(est.imag_residual)) < 1e-9

    def test_two_states_rejected(self):
        with pytest.raises(ValueError):
            StateTrajectory(np.tile([1.0 + 0j, 0.0], (2, 1)), 1e-3)


class TestMultitone:
    def test_diagonal_generator_consistency(self):
        omegas = np.array([2 * np.pi * 7.0, 2 * np.pi * 19.0])
        dt = 1e-4
        traj = exact_diagonal_trajectory(omegas, dt, 100)
        est = qsa_multitone(traj)
        psi = traj.states[1:-1]
        # oracle: under the diagonal generator the true derivative is known
        dpsi_true = -1j * (omegas[None, :] * psi)
        pred = np.einsum("tij,tj->ti", est.values, psi)
        rel = np.linalg.norm(pred - 1j * dpsi_true, axis=1) / np.linalg.norm(dpsi_true, axis=1)
        assert np.all(rel < 0.01)

    def test_zero_generator_gives_zero_matrix(self):
        psi0 = np.array([1.0, 0.0], dtype=np.complex128)
        traj = StateTrajectory(np.tile(psi0, (6, 1)), 1e-3)
        est = qsa_multitone(traj)
        assert np.max(np.abs(est.values)) == 0.0

    def test_agrees_with_monotone_on_scalar_case(self):
        traj = exact_scalar_trajectory(2 * np.pi * 4.0, 1e-4, 60)
        scalar = qsa_monotone(traj)
        matrix = qsa_multitone(traj)
        psi = traj.states[1:-1]
        lhs = np.einsum("tij,tj->ti", matrix.values, psi)
        rhs = scalar.values[:, None] * psi
        rel = np.linalg.norm(lhs - rhs, axis=1) / np.linalg.norm(rhs, axis=1)
        assert np.max(rel) < 1e-6


class TestTruncationOrder:
    def test_halving_dt_shrinks_residual_by_3x(self):
        omegas = np.array([2 * np.pi * 11.0, 2 * np.pi * 29.0])

        def residual(dt):
            traj = exact_diagonal_trajectory(omegas, dt, 64)
            est = qsa_multitone(traj)
            psi = traj.states[1:-1]
            dpsi_true = -1j * (omegas[None, :] * psi)
            pred = np.einsum("tij,tj->ti", est.values, psi)
            num = np.linalg.norm(pred - 1j * dpsi_true, axis=1)
            den = np.linalg.norm(dpsi_true, axis=1)
            return float(np.median(num / den))

        coarse = residual(2e-4)
        fine = residual(1e-4)
        assert coarse / fine >= 3.0

    def test_generator_reproduces_sampled_motion(self):
        traj = exact_diagonal_trajectory(np.array([10.0, 25.0]), 1e-3, 32)
        est = qsa_multitone(traj)
        res = generator_residuals(est, traj)
        # the rank-1 construction matches the finite-difference motion exactly
        assert np.max(res) < 1e-12


class TestEvolve:
    def test_evolve_then_estimate(self):
        omega = 2 * np.pi * 2.0
        traj = evolve(np.array([1.0, 0.0]), omega * np.eye(2), 1e-4, 100)
        est = qsa_monotone(traj)
        assert np.median(np.abs(est.values - omega)) / omega < 0.01
