"""Finite-temperature phase structure of the full Dicke model.

Mean-field critical temperature and gap equation, collective excitation
spectra in every symmetry case, the asymptotic partition ratio, and a
finite-N exact-diagonalization oracle, plus a sweep CLI.
"""

from .errors import (
    CapacityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FullDickeError,
    NonrealError,
    PhaseError,
    TruncationError,
)
from .exactdiag import (
    EDConfig,
    EDResult,
    build_hamiltonian,
    default_n_max,
    symmetry_residuals,
    thermal_observables,
)
from .meanfield import (
    FluctuationKernel,
    GapSolution,
    PartitionAsymptotics,
    Phase,
    PhiShift,
    critical_beta,
    free_energy_per_atom,
    goldstone_amplitude,
    h_normal,
    h_superradiant,
    kernel,
    log_partition_ratio,
    phi_shift,
    solve_gap,
)
from .model import (
    BETA_INF,
    ModelParams,
    SymmetryClass,
    SymmetryTag,
    classify_symmetry,
    validate_beta,
    validate_params,
)
from .spectrum import (
    CaseTag,
    SpectrumResult,
    spectrum_critical_e2,
    spectrum_normal,
    spectrum_superradiant,
    spectrum_via_kernel_roots,
)
from .sweep import SweepSpec, emit_output, parse_config, run_sweep

__all__ = [
    "BETA_INF",
    "CapacityError",
    "CaseTag",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EDConfig",
    "EDResult",
    "FluctuationKernel",
    "FullDickeError",
    "GapSolution",
    "ModelParams",
    "NonrealError",
    "PartitionAsymptotics",
    "Phase",
    "PhaseError",
    "PhiShift",
    "SpectrumResult",
    "SweepSpec",
    "SymmetryClass",
    "SymmetryTag",
    "TruncationError",
    "build_hamiltonian",
    "classify_symmetry",
    "critical_beta",
    "default_n_max",
    "emit_output",
    "free_energy_per_atom",
    "goldstone_amplitude",
    "h_normal",
    "h_superradiant",
    "kernel",
    "log_partition_ratio",
    "parse_config",
    "phi_shift",
    "run_sweep",
    "solve_gap",
    "spectrum_critical_e2",
    "spectrum_normal",
    "spectrum_superradiant",
    "spectrum_via_kernel_roots",
    "symmetry_residuals",
    "thermal_observables",
    "validate_beta",
    "validate_params",
]
