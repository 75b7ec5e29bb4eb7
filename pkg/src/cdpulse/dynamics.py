"""Counterdiabatic Hamiltonians, Schroedinger integration, and observables.

The central construction is H(t) = i * sum_n |dphi_n(t)><phi_n(t)| built
from a moving basis with analytic derivatives; every closed-form Hamiltonian
here agrees with that generic assembly entrywise.  Time evolution uses a
classical fixed-step fourth-order Runge-Kutta scheme with hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from .basis import AngleSchedule, MovingBasis, build_phased_basis
from .errors import (
    IntegrationAccuracyError,
    InvalidInputError,
    MappingUnsupportedError,
    RegimeError,
)

if TYPE_CHECKING:
    from .protocols import PulseSet

HERMITICITY_TOL = 1e-12
NORM_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class HamiltonianSpec:
    """A time-dependent Hermitian matrix: dimension plus evaluator."""

    dimension: int
    evaluator: Callable[[float], np.ndarray]
    source: str = "custom"

    def __call__(self, t: float) -> np.ndarray:
        return self.evaluator(t)

    def hermiticity_defect(self, t: float) -> float:
        h = self.evaluator(t)
        return float(np.max(np.abs(h - h.conj().T)))


def hamiltonian_from_basis(basis: MovingBasis) -> HamiltonianSpec:
    """Generic counterdiabatic Hamiltonian i * sum_n |dphi_n><phi_n|."""

    def evaluator(t: float) -> np.ndarray:
        b = basis.vectors(t)
        db = basis.vector_derivatives(t)
        return 1j * (db.T @ b.conj())

    return HamiltonianSpec(basis.dimension, evaluator, source="from-basis")


def lambda_hamiltonian(pulses: "PulseSet") -> HamiltonianSpec:
    """Three-level Lambda coupling matrix with purely imaginary couplings.

    Pattern: zero diagonal, H12 = -i*Omega_p, H23 = -i*Omega_s,
    H13 = +i*Omega_a (the Omega_a = -dtheta convention).
    """

    def evaluator(t: float) -> np.ndarray:
        op = float(pulses.omega_p(t))
        os_ = float(pulses.omega_s(t))
        oa = float(pulses.omega_a(t))
        return np.array(
            [
                [0.0, -1j * op, 1j * oa],
                [1j * op, 0.0, -1j * os_],
                [-1j * oa, 1j * os_, 0.0],
            ],
            dtype=complex,
        )

    return HamiltonianSpec(3, evaluator, source="three-level-lambda")


def phased_hamiltonian(schedule: AngleSchedule) -> HamiltonianSpec:
    """Three-level Hamiltonian of the phased family, including the
    diagonal entries -dgamma and -dkappa."""
    spec = hamiltonian_from_basis(build_phased_basis(schedule))
    return HamiltonianSpec(3, spec.evaluator, source="phased")


def four_level_hamiltonian(schedule: AngleSchedule) -> HamiltonianSpec:
    """Closed-form four-level counterdiabatic matrix.

    With the unit-normalized four-level family this equals the generic
    construction entrywise: entries +-i*dphi and +-i*dtheta in a
    checkerboard pattern with zero diagonal.
    """
    if not schedule.is_phase_free():
        raise InvalidInputError("four-level Hamiltonian requires gamma = kappa = 0")

    def evaluator(t: float) -> np.ndarray:
        dth = float(schedule.dtheta(t))
        dph = float(schedule.dphi(t))
        return np.array(
            [
                [0.0, -1j * dph, -1j * dth, 0.0],
                [1j * dph, 0.0, 0.0, -1j * dth],
                [1j * dth, 0.0, 0.0, -1j * dph],
                [0.0, 1j * dth, 1j * dph, 0.0],
            ],
            dtype=complex,
        )

    return HamiltonianSpec(4, evaluator, source="four-level")


def cavity_qed_hamiltonian(pulses: "PulseSet") -> HamiltonianSpec:
    """Single-excitation cavity Hamiltonian with g1 = -i*Omega_p, g2 = i*Omega_s.

    Basis ordering: |e,g>|0>, |g,g>|1>, |g,e>|0>.  Only pulse sets without
    a ground-ground coupling (Omega_a identically zero) can be mapped.
    """
    probe = np.linspace(pulses.t0, pulses.tf, 257)
    if np.max(np.abs(pulses.omega_a(probe))) > 1e-14:
        raise MappingUnsupportedError(
            "cavity mapping requires Omega_a identically zero"
        )

    def evaluator(t: float) -> np.ndarray:
        g1 = -1j * float(pulses.omega_p(t))
        g2 = 1j * float(pulses.omega_s(t))
        return np.array(
            [
                [0.0, g1, 0.0],
                [np.conj(g1), 0.0, np.conj(g2)],
                [0.0, g2, 0.0],
            ],
            dtype=complex,
        )

    return HamiltonianSpec(3, evaluator, source="cavity-qed")


@dataclass(frozen=True)
class Trajectory:
    """Integration record: time grid and complex state vectors."""

    times: np.ndarray
    states: np.ndarray

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def populations(self) -> np.ndarray:
        """P_n(t) = |<n|psi(t)>|^2, one column per bare state."""
        return np.abs(self.states) ** 2

    @property
    def fidelities(self) -> np.ndarray:
        """Complex overlaps F_n(t) = <n|psi(t)> (the state components)."""
        return self.states

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self.states) ** 2, axis=1))

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def fidelity_to(self, target: np.ndarray) -> float:
        """|<target|psi(tf)>|^2."""
        return float(np.abs(np.vdot(np.asarray(target), self.final_state)) ** 2)


def evolve(
    spec: HamiltonianSpec,
    psi0: np.ndarray,
    t0: float,
    tf: float,
    steps: int = 4000,
) -> Trajectory:
    """Integrate i d/dt psi = H(t) psi with fixed-step RK4.

    No per-step renormalization is applied; norm drift beyond 1e-6 raises
    IntegrationAccuracyError (use more steps).
    """
    if steps < 100:
        raise InvalidInputError(f"need steps >= 100, got {steps}")
    if tf <= t0:
        raise InvalidInputError(f"need tf > t0, got [{t0}, {tf}]")
    psi = np.asarray(psi0, dtype=complex).copy()
    if psi.shape != (spec.dimension,):
        raise InvalidInputError(
            f"psi0 has shape {psi.shape}, expected ({spec.dimension},)"
        )
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise InvalidInputError(
            f"psi0 norm deviates from 1 by {abs(np.linalg.norm(psi) - 1.0):.3e}"
        )

    h = (tf - t0) / steps
    times = t0 + h * np.arange(steps + 1)
    states = np.empty((steps + 1, spec.dimension), dtype=complex)
    states[0] = psi

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return -1j * (spec.evaluator(t) @ y)

    for k in range(steps):
        t = times[k]
        k1 = rhs(t, psi)
        k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2)
        k4 = rhs(t + h, psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[k + 1] = psi
        drift = abs(np.linalg.norm(psi) - 1.0)
        if drift > NORM_DRIFT_TOL:
            raise IntegrationAccuracyError(
                f"norm drift {drift:.3e} at t = {times[k + 1]:.6g}; "
                f"increase the step count (currently {steps})"
            )

    return Trajectory(times=times, states=states)


@dataclass(frozen=True)
class PhaseExtraction:
    """Mixing angle and |3>-phase read off a two-state trajectory.

    ``kappa_prime`` is the continuously unwrapped principal argument of
    <3|psi>; samples where |<3|psi>| < 1e-12 are reported as NaN gaps.
    """

    theta_prime: np.ndarray
    kappa_prime: np.ndarray


def extract_theta_kappa(traj: Trajectory) -> PhaseExtraction:
    """Extract theta' = arcsin|<1|psi>| and the unwrapped phase of <3|psi>."""
    if traj.dimension != 3:
        raise InvalidInputError("phase extraction requires a 3-level trajectory")
    a1 = traj.states[:, 0]
    a3 = traj.states[:, 2]
    theta_prime = np.arcsin(np.clip(np.abs(a1), 0.0, 1.0))

    kappa_prime = np.full(a3.shape, np.nan)
    valid = np.abs(a3) >= 1e-12
    raw = np.angle(a3[valid])
    if raw.size:
        # continuity-based 2*pi correction across valid samples
        kappa_prime[valid] = np.unwrap(raw)
    return PhaseExtraction(theta_prime=theta_prime, kappa_prime=kappa_prime)


def bloch_coordinates(traj: Trajectory) -> np.ndarray:
    """Bloch vectors (x, y, z) for the {|1>, |3>} two-state regime.

    |1> sits at the north pole; the azimuth equals the relative phase of
    the |3> amplitude.  Raises RegimeError on |2> leakage above 1e-10.
    """
    if traj.dimension != 3:
        raise RegimeError("Bloch mapping requires a 3-level trajectory")
    leak = float(np.max(np.abs(traj.states[:, 1])))
    if leak > 1e-10:
        raise RegimeError(
            f"|2> amplitude reaches {leak:.3e}; not a two-state trajectory"
        )
    a = traj.states[:, 0]
    b = traj.states[:, 2]
    z = np.abs(a) ** 2 - np.abs(b) ** 2
    xy = 2.0 * np.conj(a) * b
    return np.column_stack([xy.real, xy.imag, z])
