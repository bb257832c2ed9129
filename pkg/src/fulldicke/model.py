"""Model parameters, inverse temperature, and symmetry classification.

The model couples N two-level atoms (splitting Omega) to one boson mode
(frequency omega0) through a rotating term of strength g1 and a
counter-rotating term of strength g2, in units with hbar = kB = 1.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

#: Distinguished inverse temperature for the zero-temperature limit.
BETA_INF = math.inf


@dataclass(frozen=True)
class ModelParams:
    """The four Hamiltonian constants.

    omega0 and Omega must be positive; g1 and g2 may take arbitrary
    non-negative values.
    """

    omega0: float
    Omega: float
    g1: float
    g2: float

    @property
    def g_sum(self) -> float:
        return self.g1 + self.g2


class SymmetryTag(str, Enum):
    U1_SUM = "U1_SUM"      # conserves n + m
    U1_DIFF = "U1_DIFF"    # conserves n - m
    Z2_ONLY = "Z2_ONLY"    # conserves parity only
    FREE = "FREE"          # decoupled, everything above conserved


@dataclass(frozen=True)
class SymmetryClass:
    tag: SymmetryTag
    conserved: str


def _require_finite(name: str, value) -> float:
    try:
        ok = math.isfinite(value)
    except TypeError:
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not ok:
        raise DomainError(f"{name} must be finite, got {value!r}")
    return float(value)


def validate_params(p: ModelParams) -> ModelParams:
    """Check the parameter invariants; returns p unchanged when they hold."""
    omega0 = _require_finite("omega0", p.omega0)
    Omega = _require_finite("Omega", p.Omega)
    g1 = _require_finite("g1", p.g1)
    g2 = _require_finite("g2", p.g2)
    if omega0 <= 0.0:
        raise DomainError(f"omega0 must be > 0, got {omega0}")
    if Omega <= 0.0:
        raise DomainError(f"Omega must be > 0, got {Omega}")
    if g1 < 0.0:
        raise DomainError(f"g1 must be >= 0, got {g1}")
    if g2 < 0.0:
        raise DomainError(f"g2 must be >= 0, got {g2}")
    return p


def validate_beta(beta: float) -> float:
    """Check an inverse temperature: positive, finite or the infinite value."""
    try:
        if math.isnan(beta):
            raise DomainError("beta must not be NaN")
    except TypeError:
        raise DomainError(f"beta must be a real number, got {beta!r}") from None
    if beta <= 0.0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return float(beta)


def classify_symmetry(p: ModelParams) -> SymmetryClass:
    """Symmetry class of the Hamiltonian from the zero pattern of (g1, g2).

    A coupling counts as zero only when it is exactly 0; the class is
    discontinuous in the couplings by nature and the caller picks the case.
    """
    validate_params(p)
    if p.g1 > 0.0 and p.g2 == 0.0:
        return SymmetryClass(SymmetryTag.U1_SUM, "n+m")
    if p.g1 == 0.0 and p.g2 > 0.0:
        return SymmetryClass(SymmetryTag.U1_DIFF, "n-m")
    if p.g1 > 0.0 and p.g2 > 0.0:
        return SymmetryClass(SymmetryTag.Z2_ONLY, "parity")
    return SymmetryClass(SymmetryTag.FREE, "all")
