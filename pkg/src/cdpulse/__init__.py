"""Counterdiabatic pulse design and verification for 3/4-level state transfer."""

from .basis import (
    AngleSchedule,
    BasisFamily,
    GeneralAngles,
    MovingBasis,
    angle_vector,
    build_four_level_basis,
    build_phased_basis,
    build_three_real_basis,
    check_orthogonality_condition,
)
from .dynamics import (
    HamiltonianSpec,
    PhaseExtraction,
    Trajectory,
    bloch_coordinates,
    cavity_qed_hamiltonian,
    evolve,
    extract_theta_kappa,
    four_level_hamiltonian,
    hamiltonian_from_basis,
    lambda_hamiltonian,
    phased_hamiltonian,
)
from .metrics import (
    DriveMetrics,
    RatioSurface,
    drive_metrics,
    mode_comparison_ratio,
    ratio_surface,
)
from .protocols import (
    Branch,
    Design,
    MultiModeSolution,
    Protocol,
    ProtocolRequest,
    PulseSet,
    TargetState,
    design,
    design_multimode,
    design_phased,
    design_protocol_I,
    design_protocol_II,
    design_protocol_II_no_microwave,
    preset_targets,
    select_branch,
    solve_multimode_boundary,
)
from .schedules import (
    CubicBoundary,
    CubicPolynomial,
    fit_cubic,
    shape_factor,
    sine_fit_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "AngleSchedule",
    "BasisFamily",
    "Branch",
    "CubicBoundary",
    "CubicPolynomial",
    "Design",
    "DriveMetrics",
    "GeneralAngles",
    "HamiltonianSpec",
    "MovingBasis",
    "MultiModeSolution",
    "PhaseExtraction",
    "Protocol",
    "ProtocolRequest",
    "PulseSet",
    "RatioSurface",
    "TargetState",
    "Trajectory",
    "angle_vector",
    "bloch_coordinates",
    "build_four_level_basis",
    "build_phased_basis",
    "build_three_real_basis",
    "cavity_qed_hamiltonian",
    "check_orthogonality_condition",
    "design",
    "design_multimode",
    "design_phased",
    "design_protocol_I",
    "design_protocol_II",
    "design_protocol_II_no_microwave",
    "drive_metrics",
    "evolve",
    "extract_theta_kappa",
    "fit_cubic",
    "four_level_hamiltonian",
    "hamiltonian_from_basis",
    "lambda_hamiltonian",
    "mode_comparison_ratio",
    "phased_hamiltonian",
    "preset_targets",
    "ratio_surface",
    "select_branch",
    "shape_factor",
    "sine_fit_deviation",
    "solve_multimode_boundary",
]
