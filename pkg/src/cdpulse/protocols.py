"""Pulse designs: from (initial state, target state, T) to schedules and fields.

Five designs are provided.  Two single-mode routes drive the system along
one moving state (with and without the ground-ground microwave coupling),
a multi-mode route transports a fixed superposition of moving states from
|1> without any microwave field, and a phased route realizes targets whose
|3> amplitude carries a prescribed winding phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .basis import (
    AngleSchedule,
    MovingBasis,
    build_phased_basis,
    build_three_real_basis,
    constant_function,
    zero_function,
)
from .dynamics import HamiltonianSpec, hamiltonian_from_basis, lambda_hamiltonian
from .errors import (
    BoundarySolveError,
    InvalidInputError,
    ProtocolMismatchError,
    UnsupportedBranchError,
)
from .schedules import CubicBoundary, CubicPolynomial, fit_cubic

NORM_TOL = 1e-12
BOUNDARY_RESIDUAL_TOL = 1e-10


class Protocol(Enum):
    SINGLE_MODE_I = "single-I"
    SINGLE_MODE_II = "single-II"
    SINGLE_MODE_II_NO_MICROWAVE = "single-II-nomw"
    MULTI_MODE = "multi"
    PHASED = "phased"


class Branch(Enum):
    """Choices for the final mixing angle theta(T) of the single-mode route.

    LEAST_ENERGY is the signed arcsin branch, which minimizes |theta(T)|
    and hence the pulse intensity.  The remaining four reproduce the
    sign patterns of the arccos/arcsin alternatives.
    """

    LEAST_ENERGY = "least-energy"
    ARCSIN_PLUS = "arcsin-plus"
    ARCSIN_MINUS = "arcsin-minus"
    ARCCOS_PLUS = "arccos-plus"
    ARCCOS_MINUS = "arccos-minus"


@dataclass(frozen=True)
class TargetState:
    """Target amplitudes (mu, eta*e^{i gamma}, nu*e^{i kappa}), unit norm."""

    mu: float
    eta: float
    nu: float
    gamma_phase: float = 0.0
    kappa_phase: float = 0.0

    def __post_init__(self) -> None:
        residual = abs(self.mu**2 + self.eta**2 + self.nu**2 - 1.0)
        if residual > NORM_TOL:
            raise InvalidInputError(
                f"target norm residual {residual:.3e} exceeds {NORM_TOL:.1e}"
            )

    @classmethod
    def normalized(
        cls,
        mu: float,
        eta: float,
        nu: float,
        gamma_phase: float = 0.0,
        kappa_phase: float = 0.0,
    ) -> "TargetState":
        """Rescale (mu, eta, nu) onto the unit sphere before construction."""
        norm = math.sqrt(mu**2 + eta**2 + nu**2)
        if norm == 0.0:
            raise InvalidInputError("target amplitudes are all zero")
        return cls(mu / norm, eta / norm, nu / norm, gamma_phase, kappa_phase)

    def norm_residual(self) -> float:
        return abs(self.mu**2 + self.eta**2 + self.nu**2 - 1.0)


@dataclass(frozen=True)
class ProtocolRequest:
    """A design request: protocol, target, initial state, and timing."""

    protocol: Protocol
    target: TargetState
    initial_state: Optional[object] = None  # basis index 1..3 or amplitude vector
    t0: float = 0.0
    tf: float = 1.0
    branch: Branch = Branch.LEAST_ENERGY
    lambda_rate: Optional[float] = None  # phase winding rate, default 0.5/T

    def __post_init__(self) -> None:
        if not (np.isfinite(self.t0) and np.isfinite(self.tf) and self.tf > self.t0):
            raise InvalidInputError(f"need tf > t0, got [{self.t0}, {self.tf}]")

    @property
    def duration(self) -> float:
        return self.tf - self.t0


@dataclass(frozen=True)
class PulseSet:
    """Drive fields Omega_p, Omega_s, Omega_a as functions of time (units 1/T)."""

    omega_p: Callable
    omega_s: Callable
    omega_a: Callable
    t0: float
    tf: float

    def sample(self, n: int = 1001):
        """Uniform sample grid: (t, Omega_p, Omega_s, Omega_a) arrays."""
        t = np.linspace(self.t0, self.tf, n)
        return (
            t,
            np.asarray(self.omega_p(t), dtype=float),
            np.asarray(self.omega_s(t), dtype=float),
            np.asarray(self.omega_a(t), dtype=float),
        )


@dataclass(frozen=True)
class MultiModeSolution:
    """Boundary angles and mode coefficients of the multi-mode design."""

    theta0: float
    theta_f: float
    phi0: float
    phi_f: float
    mode_coefficients: tuple

    @property
    def zeta(self) -> float:
        return self.phi_f


@dataclass(frozen=True)
class Design:
    """A finished design: schedule, pulses, Hamiltonian, and bookkeeping."""

    protocol: Protocol
    schedule: AngleSchedule
    pulses: PulseSet
    hamiltonian: HamiltonianSpec
    initial_state: np.ndarray
    target_vector: np.ndarray
    boundary: dict
    basis: Optional[MovingBasis] = None
    mode_index: Optional[int] = None
    mode_coefficients: Optional[tuple] = None


def _bare_state(index: int, dimension: int = 3) -> np.ndarray:
    v = np.zeros(dimension, dtype=complex)
    v[index - 1] = 1.0
    return v


def _check_initial(request: ProtocolRequest, required_index: int) -> np.ndarray:
    """Validate that the requested initial state is the protocol's bare state."""
    init = request.initial_state
    if init is None:
        return _bare_state(required_index)
    if isinstance(init, (int, np.integer)):
        if int(init) != required_index:
            raise ProtocolMismatchError(
                f"{request.protocol.value} starts from |{required_index}>, "
                f"got |{int(init)}>"
            )
        return _bare_state(required_index)
    vec = np.asarray(init, dtype=complex)
    if vec.shape != (3,):
        raise InvalidInputError(f"initial state has shape {vec.shape}, expected (3,)")
    if abs(np.linalg.norm(vec) - 1.0) > 1e-8:
        raise InvalidInputError("initial state vector is not normalized")
    if abs(np.vdot(_bare_state(required_index), vec)) < 1.0 - 1e-10:
        raise ProtocolMismatchError(
            f"{request.protocol.value} starts from |{required_index}>"
        )
    return vec


def _cubic_schedule_pair(
    theta_poly: CubicPolynomial | None,
    theta_const: float | None,
    phi_poly: CubicPolynomial | None,
    phi_const: float | None,
    t0: float,
    tf: float,
    **extra,
) -> AngleSchedule:
    if theta_poly is not None:
        theta, dtheta = theta_poly, theta_poly.derivative
    else:
        theta, dtheta = constant_function(theta_const or 0.0), zero_function
    if phi_poly is not None:
        phi, dphi = phi_poly, phi_poly.derivative
    else:
        phi, dphi = constant_function(phi_const or 0.0), zero_function
    return AngleSchedule(
        t0=t0, tf=tf, theta=theta, dtheta=dtheta, phi=phi, dphi=dphi, **extra
    )


def select_branch(mu: float, nu: float, branch: Branch) -> float:
    """Final mixing angle theta(T) for a two-state target mu|1> + nu|3>."""
    if abs(mu**2 + nu**2 - 1.0) > 1e-9:
        raise InvalidInputError(
            f"(mu, nu) not normalized: residual {abs(mu**2 + nu**2 - 1.0):.3e}"
        )
    if branch is Branch.LEAST_ENERGY:
        return math.asin(nu)
    if branch is Branch.ARCSIN_PLUS:
        return math.asin(abs(nu))
    if branch is Branch.ARCSIN_MINUS:
        return -math.asin(abs(nu))
    if branch is Branch.ARCCOS_PLUS:
        return math.pi + math.acos(abs(mu))
    if branch is Branch.ARCCOS_MINUS:
        return math.pi - math.acos(abs(mu))
    raise InvalidInputError(f"unknown branch {branch}")


def _require_nonnegative(target: TargetState) -> None:
    if min(target.mu, target.eta, target.nu) < 0.0:
        raise UnsupportedBranchError(
            "negative target amplitudes are not designed directly; fold the "
            "signs into a branch choice (single-mode route) or a global phase"
        )


def design_protocol_I(request: ProtocolRequest) -> Design:
    """Two-state transfer |1> -> mu|1> + nu|3> with the microwave field only."""
    if request.protocol is not Protocol.SINGLE_MODE_I:
        raise ProtocolMismatchError(f"expected single-I, got {request.protocol.value}")
    tgt = request.target
    if abs(tgt.eta) > NORM_TOL:
        raise ProtocolMismatchError(
            f"single-I needs eta = 0, got eta = {tgt.eta!r}"
        )
    initial = _check_initial(request, 1)
    theta_T = select_branch(tgt.mu, tgt.nu, request.branch)
    poly = fit_cubic(CubicBoundary(request.t0, request.tf, 0.0, theta_T))
    schedule = _cubic_schedule_pair(poly, None, None, 0.0, request.t0, request.tf)
    dtheta = poly.derivative
    pulses = PulseSet(
        omega_p=zero_function,
        omega_s=zero_function,
        omega_a=lambda t: -dtheta(t),
        t0=request.t0,
        tf=request.tf,
    )
    target_vector = np.array([math.cos(theta_T), 0.0, math.sin(theta_T)], dtype=complex)
    return Design(
        protocol=request.protocol,
        schedule=schedule,
        pulses=pulses,
        hamiltonian=lambda_hamiltonian(pulses),
        initial_state=initial,
        target_vector=target_vector,
        boundary={
            "theta_0": 0.0,
            "theta_f": theta_T,
            "phi_0": 0.0,
            "phi_f": 0.0,
            "branch": request.branch.value,
        },
        basis=build_three_real_basis(schedule),
        mode_index=1,
        mode_coefficients=(1.0, 0.0, 0.0),
    )


def design_protocol_II(request: ProtocolRequest) -> Design:
    """Three-state transfer |1> -> mu|1> + eta|2> - nu|3> with all three fields."""
    if request.protocol is not Protocol.SINGLE_MODE_II:
        raise ProtocolMismatchError(f"expected single-II, got {request.protocol.value}")
    tgt = request.target
    _require_nonnegative(tgt)
    initial = _check_initial(request, 1)
    chi = math.atan2(tgt.mu, tgt.nu)  # arctan(mu/nu); pi/2 limit at nu = 0
    theta_poly = fit_cubic(CubicBoundary(request.t0, request.tf, math.pi / 2.0, chi))
    phi_poly = fit_cubic(
        CubicBoundary(request.t0, request.tf, 0.0, math.asin(tgt.eta))
    )
    schedule = _cubic_schedule_pair(
        theta_poly, None, phi_poly, None, request.t0, request.tf
    )
    pulses = _lambda_pulses(schedule)
    target_vector = np.array([tgt.mu, tgt.eta, -tgt.nu], dtype=complex)
    return Design(
        protocol=request.protocol,
        schedule=schedule,
        pulses=pulses,
        hamiltonian=lambda_hamiltonian(pulses),
        initial_state=initial,
        target_vector=target_vector,
        boundary={
            "theta_0": math.pi / 2.0,
            "theta_f": chi,
            "phi_0": 0.0,
            "phi_f": math.asin(tgt.eta),
            "chi": chi,
        },
        basis=build_three_real_basis(schedule),
        mode_index=2,
        mode_coefficients=(0.0, 1.0, 0.0),
    )


def design_protocol_II_no_microwave(request: ProtocolRequest) -> Design:
    """Transfer |2> -> mu|1> + eta|2> - nu|3> with theta frozen (Omega_a = 0)."""
    if request.protocol is not Protocol.SINGLE_MODE_II_NO_MICROWAVE:
        raise ProtocolMismatchError(
            f"expected single-II-nomw, got {request.protocol.value}"
        )
    tgt = request.target
    _require_nonnegative(tgt)
    initial = _check_initial(request, 2)
    chi = math.atan2(tgt.mu, tgt.nu)
    phi_poly = fit_cubic(
        CubicBoundary(request.t0, request.tf, math.pi / 2.0, math.asin(tgt.eta))
    )
    schedule = _cubic_schedule_pair(
        None, chi, phi_poly, None, request.t0, request.tf
    )
    dphi = phi_poly.derivative
    sin_chi, cos_chi = math.sin(chi), math.cos(chi)
    pulses = PulseSet(
        omega_p=lambda t: dphi(t) * sin_chi,
        omega_s=lambda t: dphi(t) * cos_chi,
        omega_a=zero_function,
        t0=request.t0,
        tf=request.tf,
    )
    target_vector = np.array([tgt.mu, tgt.eta, -tgt.nu], dtype=complex)
    return Design(
        protocol=request.protocol,
        schedule=schedule,
        pulses=pulses,
        hamiltonian=lambda_hamiltonian(pulses),
        initial_state=initial,
        target_vector=target_vector,
        boundary={
            "theta_0": chi,
            "theta_f": chi,
            "phi_0": math.pi / 2.0,
            "phi_f": math.asin(tgt.eta),
            "chi": chi,
        },
        basis=build_three_real_basis(schedule),
        mode_index=2,
        mode_coefficients=(0.0, 1.0, 0.0),
    )


def solve_multimode_boundary(target: TargetState) -> MultiModeSolution:
    """Boundary angles for the microwave-free multi-mode transfer from |1>.

    phi_0 = 0 removes the third mode; theta is frozen at
    arctan((1 - mu)/nu), and phi_f resolves the arcsin two-valuedness via
    atan2 so that all three boundary equations hold simultaneously.
    """
    _require_nonnegative(target)
    mu, eta, nu = target.mu, target.eta, target.nu
    if abs(mu - 1.0) < NORM_TOL:
        # target equals initial state: identity transfer, zero pulses
        return MultiModeSolution(
            theta0=math.pi / 2.0,
            theta_f=math.pi / 2.0,
            phi0=0.0,
            phi_f=0.0,
            mode_coefficients=(0.0, 1.0, 0.0),
        )
    theta0 = math.atan2(1.0 - mu, nu)  # pi/2 limit at nu = 0
    s0, c0 = math.sin(theta0), math.cos(theta0)
    phi_f = math.atan2(eta, mu * s0 - nu * c0)
    residuals = (
        abs(c0 - (mu * c0 + nu * s0)),
        abs(s0 * math.sin(phi_f) - eta),
        abs(s0 * math.cos(phi_f) - (mu * s0 - nu * c0)),
    )
    if max(residuals) > BOUNDARY_RESIDUAL_TOL:
        raise BoundarySolveError(
            f"boundary residuals {residuals} exceed {BOUNDARY_RESIDUAL_TOL:.1e}"
        )
    return MultiModeSolution(
        theta0=theta0,
        theta_f=theta0,
        phi0=0.0,
        phi_f=phi_f,
        mode_coefficients=(c0, s0, 0.0),
    )


def design_multimode(request: ProtocolRequest) -> Design:
    """Microwave-free transfer |1> -> mu|1> + eta|2> + nu|3>."""
    if request.protocol is not Protocol.MULTI_MODE:
        raise ProtocolMismatchError(f"expected multi, got {request.protocol.value}")
    tgt = request.target
    initial = _check_initial(request, 1)
    solution = solve_multimode_boundary(tgt)
    phi_poly = fit_cubic(
        CubicBoundary(request.t0, request.tf, 0.0, solution.zeta)
    )
    schedule = _cubic_schedule_pair(
        None, solution.theta0, phi_poly, None, request.t0, request.tf
    )
    dphi = phi_poly.derivative
    s0, c0 = math.sin(solution.theta0), math.cos(solution.theta0)
    pulses = PulseSet(
        omega_p=lambda t: dphi(t) * s0,
        omega_s=lambda t: dphi(t) * c0,
        omega_a=zero_function,
        t0=request.t0,
        tf=request.tf,
    )
    target_vector = np.array([tgt.mu, tgt.eta, tgt.nu], dtype=complex)
    return Design(
        protocol=request.protocol,
        schedule=schedule,
        pulses=pulses,
        hamiltonian=lambda_hamiltonian(pulses),
        initial_state=initial,
        target_vector=target_vector,
        boundary={
            "theta_0": solution.theta0,
            "theta_f": solution.theta_f,
            "phi_0": solution.phi0,
            "phi_f": solution.phi_f,
            "zeta": solution.zeta,
        },
        basis=build_three_real_basis(schedule),
        mode_index=None,
        mode_coefficients=solution.mode_coefficients,
    )


def design_phased(request: ProtocolRequest) -> Design:
    """Transfer |3> -> mu|1> + e^{i kappa} nu|3> with a winding |3>-phase.

    kappa(t) = lambda*pi*(t - t0) with lambda = lambda_rate (default
    0.5/T); gamma defaults to 0; phi stays 0, so the dynamics is
    two-state and Bloch-representable.
    """
    if request.protocol is not Protocol.PHASED:
        raise ProtocolMismatchError(f"expected phased, got {request.protocol.value}")
    tgt = request.target
    if abs(tgt.eta) > NORM_TOL:
        raise UnsupportedBranchError(
            "phased design covers two-state targets only (eta = 0); the "
            "three-state phased boundary recipe is out of scope"
        )
    if tgt.mu < 0.0 or tgt.nu < 0.0:
        raise UnsupportedBranchError(
            "phased design expects nonnegative magnitudes; phases belong in "
            "kappa_phase"
        )
    initial = _check_initial(request, 3)
    T = request.duration
    lam = request.lambda_rate if request.lambda_rate is not None else 0.5 / T
    theta_poly = fit_cubic(
        CubicBoundary(request.t0, request.tf, 0.0, math.asin(tgt.mu))
    )
    t0 = request.t0
    kappa = lambda t: lam * math.pi * (np.asarray(t, dtype=float) - t0)
    dkappa = constant_function(lam * math.pi)
    schedule = _cubic_schedule_pair(
        theta_poly,
        None,
        None,
        0.0,
        request.t0,
        request.tf,
        kappa=kappa,
        dkappa=dkappa,
    )
    basis = build_phased_basis(schedule)
    dtheta = theta_poly.derivative
    pulses = PulseSet(
        omega_p=zero_function,
        omega_s=zero_function,
        omega_a=dtheta,  # phased convention: Omega_a = +dtheta
        t0=request.t0,
        tf=request.tf,
    )
    kappa_f = lam * math.pi * T
    target_vector = np.array(
        [tgt.mu, 0.0, np.exp(1j * kappa_f) * tgt.nu], dtype=complex
    )
    return Design(
        protocol=request.protocol,
        schedule=schedule,
        pulses=pulses,
        hamiltonian=hamiltonian_from_basis(basis),
        initial_state=initial,
        target_vector=target_vector,
        boundary={
            "theta_0": 0.0,
            "theta_f": math.asin(tgt.mu),
            "phi_0": 0.0,
            "phi_f": 0.0,
            "kappa_f": kappa_f,
            "lambda": lam,
        },
        basis=basis,
        mode_index=1,
        mode_coefficients=(1.0, 0.0, 0.0),
    )


def _lambda_pulses(schedule: AngleSchedule) -> PulseSet:
    """Omega_p = dphi*sin(theta), Omega_s = dphi*cos(theta), Omega_a = -dtheta."""
    return PulseSet(
        omega_p=lambda t: schedule.dphi(t) * np.sin(schedule.theta(t)),
        omega_s=lambda t: schedule.dphi(t) * np.cos(schedule.theta(t)),
        omega_a=lambda t: -schedule.dtheta(t),
        t0=schedule.t0,
        tf=schedule.tf,
    )


_DESIGNERS = {
    Protocol.SINGLE_MODE_I: design_protocol_I,
    Protocol.SINGLE_MODE_II: design_protocol_II,
    Protocol.SINGLE_MODE_II_NO_MICROWAVE: design_protocol_II_no_microwave,
    Protocol.MULTI_MODE: design_multimode,
    Protocol.PHASED: design_phased,
}


def design(request: ProtocolRequest) -> Design:
    """Dispatch a request to its protocol's designer."""
    return _DESIGNERS[request.protocol](request)


_SQ2 = 1.0 / math.sqrt(2.0)
_SQ3 = 1.0 / math.sqrt(3.0)


def preset_targets(name: str, tf: float = 1.0) -> ProtocolRequest:
    """Canonical requests: 1:2 / 1:3 beam splitters and the cavity Bell state.

    The cavity preset aims at the Bell state (|e,g> + |g,e>)/sqrt(2), i.e.
    equal weight on the first and third single-excitation basis states.
    """
    presets = {
        "beamsplit12": ProtocolRequest(
            Protocol.SINGLE_MODE_II_NO_MICROWAVE,
            TargetState(_SQ2, 0.0, _SQ2),
            initial_state=2,
            tf=tf,
        ),
        "beamsplit13": ProtocolRequest(
            Protocol.SINGLE_MODE_II_NO_MICROWAVE,
            TargetState.normalized(_SQ3, _SQ3, _SQ3),
            initial_state=2,
            tf=tf,
        ),
        "cavity-bell": ProtocolRequest(
            Protocol.MULTI_MODE,
            TargetState(_SQ2, 0.0, _SQ2),
            initial_state=1,
            tf=tf,
        ),
    }
    try:
        return presets[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown preset {name!r}; choose from {sorted(presets)}"
        ) from None
