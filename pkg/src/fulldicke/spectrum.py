"""Collective excitation spectra.

Each phase and coupling case has a closed form; an independent route
interpolates the fluctuation-kernel numerator from point evaluations and
solves the resulting quadratic in E^2, which serves as a cross-check.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceError, DomainError, NonrealError, PhaseError
from .meanfield import (
    CRITICAL_BAND,
    GapSolution,
    Phase,
    critical_beta,
    h_normal,
    h_superradiant,
    solve_gap,
    sr_kernel_coeffs,
)
from .model import ModelParams, validate_beta, validate_params


class CaseTag(str, Enum):
    NORMAL = "normal"
    CRITICAL = "critical"
    SR_Z2 = "sr_z2"
    SR_U1_SUM = "sr_u1_sum"
    SR_U1_DIFF = "sr_u1_diff"


@dataclass(frozen=True)
class SpectrumResult:
    """Collective excitation energies, ascending; goldstone marks an exact
    zero mode from continuous symmetry breaking."""

    energies: tuple[float, ...]
    goldstone: bool
    case_tag: CaseTag


def _branch_energies(coef_p: float, coef_q: float) -> tuple[float, float]:
    """Real nonnegative roots E of E^4 - P E^2 + Q = 0, ascending.

    A discriminant within rounding noise of zero is an exact double root
    (this happens on whole parameter lines, e.g. g1 = 0 at omega0 = Omega);
    anything more negative means complex energies and raises.
    """
    disc = coef_p * coef_p - 4.0 * coef_q
    noise = 1e-12 * max(coef_p * coef_p, abs(4.0 * coef_q))
    if abs(disc) <= noise:
        disc = 0.0
    if disc < 0.0:
        raise NonrealError(
            f"negative discriminant {disc:.6e}: complex collective energies "
            f"(out-of-phase call or solver inconsistency)"
        )
    root = math.sqrt(disc)
    x_hi = 0.5 * (coef_p + root)
    if x_hi < 0.0:
        raise NonrealError(f"negative squared energy {x_hi:.6e}")
    x_lo = coef_q / x_hi if x_hi > 0.0 else 0.0
    if x_lo < 0.0:
        if x_lo >= -1e-12 * max(x_hi, 1.0):
            x_lo = 0.0  # gap-closing root within rounding noise
        else:
            raise NonrealError(f"negative squared energy {x_lo:.6e}")
    return math.sqrt(x_lo), math.sqrt(x_hi)


def _normal_coeffs(p: ModelParams, t: float) -> tuple[float, float]:
    """Coefficients (P, Q) of the normal-phase kernel numerator in E^2.

    Q is evaluated in the factored form whose first factor vanishes at the
    critical tanh value, so the gap closing is numerically clean.
    """
    coef_p = p.omega0 * p.omega0 + p.Omega * p.Omega + 2.0 * (p.g1 * p.g1 - p.g2 * p.g2) * t
    gsum = p.g1 + p.g2
    gdif = p.g1 - p.g2
    coef_q = (t * gsum * gsum - p.omega0 * p.Omega) * (t * gdif * gdif - p.omega0 * p.Omega)
    return coef_p, coef_q


def spectrum_normal(p: ModelParams, beta: float) -> SpectrumResult:
    """Both collective branches in the normal phase.

    At beta_c the lower branch closes; within the critical band the zero root
    is reported exactly and the result is tagged CRITICAL (a gap closing, not
    a symmetry-protected mode).  Calls in the superradiant regime raise.
    """
    validate_params(p)
    validate_beta(beta)
    bc = critical_beta(p) if p.g_sum > 0.0 else None
    if bc is not None:
        if math.isfinite(beta) and abs(beta - bc) <= CRITICAL_BAND * bc:
            t = math.tanh(0.5 * beta * p.Omega)
            coef_p, _ = _normal_coeffs(p, t)
            return SpectrumResult((0.0, math.sqrt(coef_p)), False, CaseTag.CRITICAL)
        if beta > bc:
            raise PhaseError(
                "superradiant regime: use spectrum_superradiant"
            )
    t = 1.0 if math.isinf(beta) else math.tanh(0.5 * beta * p.Omega)
    e_lo, e_hi = _branch_energies(*_normal_coeffs(p, t))
    return SpectrumResult((e_lo, e_hi), False, CaseTag.NORMAL)


def spectrum_critical_e2(p: ModelParams) -> float:
    """The branch that stays open at the critical temperature."""
    validate_params(p)
    gsum = p.g_sum
    if gsum == 0.0 or gsum * gsum <= p.omega0 * p.Omega:
        raise DomainError("no critical point: requires (g1+g2)^2 > omega0*Omega")
    num = p.g1 * (p.Omega + p.omega0) ** 2 + p.g2 * (p.Omega - p.omega0) ** 2
    return math.sqrt(num / gsum)


def spectrum_superradiant(p: ModelParams, beta: float) -> SpectrumResult:
    """Collective branches above the transition.

    With both couplings present the kernel quartic has two positive roots;
    with exactly one coupling the lower root is the Goldstone zero of the
    broken U(1) symmetry and is reported as exactly 0.
    """
    validate_params(p)
    validate_beta(beta)
    if p.g_sum == 0.0:
        raise PhaseError("the decoupled model has no superradiant phase")
    gap = solve_gap(p, beta)
    if gap.phase is not Phase.SUPERRADIANT:
        raise PhaseError(f"not superradiant at beta={beta!r} (phase {gap.phase.value})")
    od = gap.omega_delta
    if p.g2 == 0.0:
        e_hi = math.sqrt(p.omega0 * p.omega0 + od * od + 2.0 * p.omega0 * p.Omega)
        return SpectrumResult((0.0, e_hi), True, CaseTag.SR_U1_SUM)
    if p.g1 == 0.0:
        e_hi = math.sqrt(p.omega0 * p.omega0 + od * od - 2.0 * p.omega0 * p.Omega)
        return SpectrumResult((0.0, e_hi), True, CaseTag.SR_U1_DIFF)
    e_lo, e_hi = _branch_energies(*sr_kernel_coeffs(p, od))
    return SpectrumResult((e_lo, e_hi), False, CaseTag.SR_Z2)


def _case_tag(p: ModelParams, phase: Phase) -> tuple[CaseTag, bool]:
    if phase is Phase.SUPERRADIANT:
        if p.g2 == 0.0:
            return CaseTag.SR_U1_SUM, True
        if p.g1 == 0.0:
            return CaseTag.SR_U1_DIFF, True
        return CaseTag.SR_Z2, False
    if phase is Phase.CRITICAL:
        return CaseTag.CRITICAL, False
    return CaseTag.NORMAL, False


def spectrum_via_kernel_roots(p: ModelParams, beta: float) -> SpectrumResult:
    """Spectrum from numerical roots of the analytically continued kernel.

    H(-iE) times the two denominators is a monic quadratic in E^2; its
    coefficients are recovered by interpolating point evaluations of H at
    real frequencies, and the quadratic is then solved in closed form.
    Independent of the transcribed spectrum formulas; used to cross-check
    them in every phase and coupling case.
    """
    validate_params(p)
    validate_beta(beta)
    if p.g_sum == 0.0:
        gap = GapSolution.normal(p)
    else:
        gap = solve_gap(p, beta)
    od = gap.omega_delta
    if gap.phase is Phase.SUPERRADIANT:
        h_of = lambda w: float(h_superradiant(p, od, w))
    else:
        h_of = lambda w: float(h_normal(p, beta, w))

    def numer(w: float) -> float:
        return h_of(w) * (w * w + od * od) * (w * w + p.omega0 * p.omega0)

    scale = max(p.omega0, p.Omega, od, 1.0)
    const = numer(0.0)  # pins the constant coefficient, keeping exact zeros exact
    x1, x2 = -scale * scale, -4.0 * scale * scale
    mat = np.array([[x1 * x1, x1], [x2 * x2, x2]])
    rhs = np.array([numer(scale) - const, numer(2.0 * scale) - const])
    lead, lin = np.linalg.solve(mat, rhs)
    if not (math.isfinite(lead) and math.isfinite(lin) and math.isfinite(const)) or lead == 0.0:
        raise ConvergenceError("kernel polynomial assembly produced non-finite coefficients")
    e_lo, e_hi = _branch_energies(-lin / lead, const / lead)
    tag, goldstone = _case_tag(p, gap.phase)
    return SpectrumResult((e_lo, e_hi), goldstone, tag)
