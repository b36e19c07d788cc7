"""Angular-frequency estimators on sampled state trajectories.

A trajectory is a sequence of unit-norm complex state vectors sampled at a
fixed time step. The scalar estimator recovers one angular frequency per
interior step; the matrix estimator recovers a full generator matrix per
step from the rank-1 outer-product relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-9


@dataclass
class StateTrajectory:
    """states: (T, d) complex array of unit vectors; dt: step in seconds."""

    states: np.ndarray
    dt: float

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.complex128)
        if self.states.ndim != 2:
            raise ValueError("states must be a (T, d) array")
        if self.states.shape[0] < 3:
            raise ValueError("need at least 3 states for a centered derivative")
        if self.states.shape[1] < 2:
            raise ValueError("state dimension must be >= 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        norms = np.linalg.norm(self.states, axis=1)
        if np.max(np.abs(norms - 1.0)) > NORM_TOL:
            raise ValueError("states must be unit norm within 1e-9")

    def __len__(self):
        return self.states.shape[0]


@dataclass
class OmegaSeries:
    """Per-interior-step estimate, scalar or matrix, in rad/s.

    For the scalar kind, `values` has shape (T-2,) and `imag_residual`
    carries the discarded imaginary part as a diagnostic. For the matrix
    kind, `values` has shape (T-2, d, d) complex.
    """

    values: np.ndarray
    dt: float
    kind: str  # "scalar" or "matrix"
    imag_residual: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def schrodinger_step(psi, omega, dt: float):
    """One first-order unitary step: (I - i*omega*dt) psi, renormalized.

    The linearized propagator is unitary only to first order in dt, so the
    result is rescaled back to unit norm.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    omega = np.asarray(omega, dtype=np.complex128)
    if dt < 0:
        raise ValueError("dt must be >= 0")
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ValueError("omega must be a square matrix")
    if omega.shape[0] != psi.size:
        raise ValueError(f"dimension mismatch: omega {omega.shape} vs psi {psi.size}")
    if dt == 0:
        return psi.copy()
    out = psi - 1j * dt * (omega @ psi)
    return out / np.linalg.norm(out)


def evolve(psi0, omega, dt: float, steps: int) -> StateTrajectory:
    """Generate a trajectory by repeated first-order stepping."""
    psi0 = np.asarray(psi0, dtype=np.complex128)
    psi0 = psi0 / np.linalg.norm(psi0)
    states = np.empty((steps + 1, psi0.size), dtype=np.complex128)
    states[0] = psi0
    for n in range(steps):
        states[n + 1] = schrodinger_step(states[n], omega, dt)
    return StateTrajectory(states, dt)


def _centered_derivative(states: np.ndarray, dt: float) -> np.ndarray:
    # interior points only; no endpoint estimate
    return (states[2:] - states[:-2]) / (2.0 * dt)


def qsa_monotone(traj: StateTrajectory) -> OmegaSeries:
    """Scalar angular frequency per interior step.

    omega(t) = i <psi|dpsi/dt> / <psi|psi>; the real part is the estimate
    and the imaginary part is returned as a residual diagnostic.
    """
    psi = traj.states[1:-1]
    dpsi = _centered_derivative(traj.states, traj.dt)
    num = np.sum(np.conj(psi) * dpsi, axis=1)
    den = np.sum(np.conj(psi) * psi, axis=1).real
    omega = 1j * num / den
    return OmegaSeries(omega.real, traj.dt, "scalar", imag_residual=omega.imag)


def qsa_multitone(traj: StateTrajectory) -> OmegaSeries:
    """Matrix generator per interior step.

    Omega(t) = i |dpsi><psi| [|psi><psi|]^+ with the pseudoinverse of the
    rank-1 projector taken in closed form, which collapses the product to
    i |dpsi><psi| / <psi|psi>.
    """
    psi = traj.states[1:-1]
    dpsi = _centered_derivative(traj.states, traj.dt)
    den = np.sum(np.conj(psi) * psi, axis=1).real
    outer = dpsi[:, :, None] * np.conj(psi)[:, None, :]
    omega = 1j * outer / den[:, None, None]
    return OmegaSeries(omega, traj.dt, "matrix")


def generator_residuals(series: OmegaSeries, traj: StateTrajectory, reference="analytic"):
    """Per-step relative residual ||Omega psi - i dpsi|| / ||dpsi||.

    With reference="analytic", dpsi is taken as -i Omega_est psi is compared
    against the centered finite difference of the trajectory itself; the
    residual then measures how well the estimate reproduces the sampled
    motion.
    """
    psi = traj.states[1:-1]
    dpsi = _centered_derivative(traj.states, traj.dt)
    if series.kind == "scalar":
        pred = series.values[:, None] * psi
    else:
        pred = np.einsum("tij,tj->ti", series.values, psi)
    target = 1j * dpsi
    num = np.linalg.norm(pred - target, axis=1)
    den = np.linalg.norm(target, axis=1)
    return num / np.where(den == 0, 1.0, den)
