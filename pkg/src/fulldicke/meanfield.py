"""Mean-field thermodynamics in the thermodynamic limit.

Critical temperature, the gap equation for the effective frequency, the
order parameter and free energy, the Gaussian fluctuation kernels, and the
asymptotic log-partition ratio assembled from a Matsubara product.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import polygamma

from .errors import ConvergenceError, DomainError
from .model import ModelParams, SymmetryTag, classify_symmetry, validate_beta, validate_params

#: Target residual of the gap equation, |omega0*x/(g1+g2)^2 - tanh(beta*x/2)|.
GAP_RESIDUAL_TOL = 1e-12
#: Relative half-width of the band around beta_c labeled CRITICAL.
CRITICAL_BAND = 1e-9


class Phase(str, Enum):
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"
    CRITICAL = "critical"


@dataclass(frozen=True)
class GapSolution:
    """Self-consistent mean field: phase label, effective frequency, and the
    squared order parameter (per-atom condensate density)."""

    phase: Phase
    omega_delta: float
    b0_sq: float

    @classmethod
    def normal(cls, p: ModelParams, critical: bool = False) -> "GapSolution":
        return cls(Phase.CRITICAL if critical else Phase.NORMAL, p.Omega, 0.0)


@dataclass(frozen=True)
class PhiShift:
    """Per-atom log-weight of the condensed saddle relative to the free model.

    At infinite beta the weight grows linearly in beta, so the beta-rate
    coefficient is returned instead and rate_form is set.
    """

    value: float
    rate_form: bool


@dataclass(frozen=True)
class FluctuationKernel:
    """Fluctuation kernel values at one real frequency.

    r and s_plus/s_minus are the quadratic-form components of the Gaussian
    action; the field rotation defining them is singular at g1 == g2, where
    they are None and only the ratio h survives.  Whenever they exist,
    h == (s_plus * s_minus - r**2) / (omega**2 + omega0**2).
    """

    omega: float
    r: float | None
    s_plus: complex | None
    s_minus: complex | None
    h: float


@dataclass(frozen=True)
class PartitionAsymptotics:
    """ln(Z/Z0) split into the extensive part and the fluctuation correction.

    The total is n_atoms * phi + log_correction; log_correction carries the
    O(1) pieces and, in the broken-U(1) case, the (1/2) ln N zero-mode factor.
    """

    n_atoms: int
    phi: float
    log_correction: float
    goldstone_case: bool

    @property
    def total(self) -> float:
        return self.n_atoms * self.phi + self.log_correction


def _log_cosh(x: float) -> float:
    # overflow-safe ln(cosh(x))
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _x_over_sinh(x: float) -> float:
    # overflow-safe x/sinh(x) for x > 0
    if x > 36.0:
        return 2.0 * x * math.exp(-x)
    return x / math.sinh(x)


def critical_beta(p: ModelParams) -> float | None:
    """Inverse critical temperature, or None when no transition exists.

    Solves omega0*Omega/(g1+g2)^2 = tanh(beta_c*Omega/2), which has a solution
    only for (g1+g2)^2 strictly above omega0*Omega; equality is treated as
    no transition.
    """
    validate_params(p)
    gsum = p.g_sum
    if gsum == 0.0:
        raise DomainError("critical_beta requires g1 + g2 > 0")
    ratio = p.omega0 * p.Omega / (gsum * gsum)
    if ratio >= 1.0:
        return None
    return (2.0 / p.Omega) * math.atanh(ratio)


def _gap_equation_root(p: ModelParams, beta: float) -> float:
    """Root of omega0*x/(g1+g2)^2 = tanh(beta*x/2) above Omega.

    The root is bracketed by (Omega, (g1+g2)^2/omega0] because tanh < 1;
    bisection narrows the bracket, then Newton steps polish the residual.
    """
    g2sum = p.g_sum * p.g_sum
    slope = p.omega0 / g2sum

    def f(x: float) -> float:
        return slope * x - math.tanh(0.5 * beta * x)

    def fprime(x: float) -> float:
        th = math.tanh(0.5 * beta * x)
        return slope - 0.5 * beta * (1.0 - th * th)

    lo, hi = p.Omega, g2sum / p.omega0
    if f(hi) == 0.0:
        # tanh saturated to 1 at double precision; the endpoint is the root
        return hi
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(60):
        r = f(x)
        if abs(r) <= GAP_RESIDUAL_TOL:
            return x
        d = fprime(x)
        if d > 0.0:
            step = r / d
            xn = x - step
        else:
            xn = lo - 1.0  # force the bisection fallback
        if not lo <= xn <= hi:
            if r < 0.0:
                lo = x
            else:
                hi = x
            xn = 0.5 * (lo + hi)
        x = xn
    if abs(f(x)) <= GAP_RESIDUAL_TOL:
        return x
    raise ConvergenceError(
        f"gap equation residual {abs(f(x)):.3e} above {GAP_RESIDUAL_TOL:.0e} "
        f"after iteration budget"
    )


def solve_gap(p: ModelParams, beta: float) -> GapSolution:
    """Self-consistent effective frequency and order parameter at beta.

    Below (or without) the transition the mean field vanishes; above it the
    gap equation is solved on its analytic bracket.  At beta = inf the root
    is (g1+g2)^2/omega0 exactly.  Runs within a relative band of 1e-9 around
    beta_c are labeled CRITICAL.
    """
    validate_params(p)
    validate_beta(beta)
    if p.g_sum == 0.0:
        raise DomainError("solve_gap requires g1 + g2 > 0")
    bc = critical_beta(p)
    if bc is not None and math.isfinite(beta) and abs(beta - bc) <= CRITICAL_BAND * bc:
        return GapSolution.normal(p, critical=True)
    if bc is None or beta <= bc:
        return GapSolution.normal(p)
    g2sum = p.g_sum * p.g_sum
    if math.isinf(beta):
        od = g2sum / p.omega0
    else:
        od = _gap_equation_root(p, beta)
    b0_sq = (od * od - p.Omega * p.Omega) / (4.0 * g2sum)
    return GapSolution(Phase.SUPERRADIANT, od, b0_sq)


def _check_gap(p: ModelParams, beta: float, gap: GapSolution) -> None:
    """Reject a gap solution that does not belong to (p, beta)."""
    validate_params(p)
    validate_beta(beta)
    if p.g_sum == 0.0:
        expected = GapSolution.normal(p)
    else:
        expected = solve_gap(p, beta)
    if gap.phase is not expected.phase:
        raise DomainError(
            f"gap solution is {gap.phase.value} but parameters give "
            f"{expected.phase.value}"
        )
    if not math.isclose(gap.omega_delta, expected.omega_delta, rel_tol=1e-9):
        raise DomainError(
            f"gap omega_delta {gap.omega_delta!r} inconsistent with parameters "
            f"(expected {expected.omega_delta!r})"
        )


def phi_shift(p: ModelParams, beta: float, gap: GapSolution) -> PhiShift:
    """Per-atom exponent of the condensed saddle relative to the free model.

    Zero in the normal phase.  At beta = inf the linear-in-beta rate
    coefficient is returned with rate_form=True; it equals the ground-state
    energy shift per atom with the opposite sign.
    """
    _check_gap(p, beta, gap)
    if gap.phase is not Phase.SUPERRADIANT:
        return PhiShift(0.0, math.isinf(beta))
    od = gap.omega_delta
    shift = p.omega0 * (od * od - p.Omega * p.Omega) / (4.0 * p.g_sum * p.g_sum)
    if math.isinf(beta):
        return PhiShift(0.5 * (od - p.Omega) - shift, True)
    value = -beta * shift + _log_cosh(0.5 * beta * od) - _log_cosh(0.5 * beta * p.Omega)
    return PhiShift(value, False)


def free_energy_per_atom(p: ModelParams, beta: float) -> float:
    """Per-atom free energy; the ground-state energy per atom at beta = inf.

    Continuous across beta_c: the transition is second order.
    """
    validate_params(p)
    validate_beta(beta)
    if p.g_sum == 0.0:
        gap = GapSolution.normal(p)
    else:
        gap = solve_gap(p, beta)
    if gap.phase is Phase.SUPERRADIANT:
        od = gap.omega_delta
        shift = p.omega0 * (od * od - p.Omega * p.Omega) / (4.0 * p.g_sum * p.g_sum)
        if math.isinf(beta):
            return -0.5 * od + shift
        return -(math.log(2.0) + _log_cosh(0.5 * beta * od)) / beta + shift
    if math.isinf(beta):
        return -0.5 * p.Omega
    return -(math.log(2.0) + _log_cosh(0.5 * beta * p.Omega)) / beta


def _tanh_factor(p: ModelParams, beta: float, gap: GapSolution) -> float:
    """tanh(beta*omega_delta/2) as used by the kernels.

    In the superradiant phase the gap identity
    tanh(beta*omega_delta/2) = omega0*omega_delta/(g1+g2)^2 is substituted,
    which is exact at the self-consistent root and keeps the kernel zeros
    exact.  At beta = inf the factor is 1.
    """
    if gap.phase is Phase.SUPERRADIANT:
        return p.omega0 * gap.omega_delta / (p.g_sum * p.g_sum)
    if math.isinf(beta):
        return 1.0
    return math.tanh(0.5 * beta * p.Omega)


def _h_general(p: ModelParams, omega_delta: float, t: float, omega):
    """Kernel ratio H at real frequency, general form valid in every phase."""
    w2 = np.square(np.asarray(omega, dtype=float))
    od2 = omega_delta * omega_delta
    dd = (w2 + od2) * (w2 + p.omega0 * p.omega0)
    diff = p.g1 * p.g1 - p.g2 * p.g2
    ssum = p.g1 * p.g1 + p.g2 * p.g2
    quad = diff * diff * p.Omega * p.Omega * t * t / od2
    lin = (
        2.0 * diff * p.Omega * w2
        - ssum * (p.Omega * p.Omega + od2) * p.omega0
        + 2.0 * p.g1 * p.g2 * (od2 - p.Omega * p.Omega) * p.omega0
    ) * t / omega_delta
    return 1.0 + (quad + lin) / dd


def h_normal(p: ModelParams, beta: float, omega):
    """Normal-phase kernel ratio H_I at real frequency (scalar or array)."""
    validate_params(p)
    t = 1.0 if math.isinf(beta) else math.tanh(0.5 * beta * p.Omega)
    w2 = np.square(np.asarray(omega, dtype=float))
    dd = (w2 + p.Omega * p.Omega) * (w2 + p.omega0 * p.omega0)
    diff = p.g1 * p.g1 - p.g2 * p.g2
    ssum = p.g1 * p.g1 + p.g2 * p.g2
    out = 1.0 + (diff * diff * t * t + (2.0 * diff * w2 - 2.0 * ssum * p.Omega * p.omega0) * t) / dd
    return out if isinstance(omega, np.ndarray) else float(out)


def sr_kernel_coeffs(p: ModelParams, omega_delta: float) -> tuple[float, float]:
    """Coefficients (P, Q) of the superradiant kernel numerator
    w^4 + P w^2 + Q; the roots of X^2 - P X + Q are the squared collective
    energies."""
    g2sum = p.g_sum * p.g_sum
    coef_p = (
        p.omega0 * p.omega0
        + omega_delta * omega_delta
        + 2.0 * (p.g1 * p.g1 - p.g2 * p.g2) * p.Omega * p.omega0 / g2sum
    )
    coef_q = (
        4.0 * p.g1 * p.g2 * p.omega0 * p.omega0
        * (omega_delta * omega_delta - p.Omega * p.Omega) / g2sum
    )
    return coef_p, coef_q


def h_superradiant(p: ModelParams, omega_delta: float, omega):
    """Superradiant kernel ratio H_II at real frequency (scalar or array).

    Depends on beta only through omega_delta; the constant numerator
    coefficient carries an exact g1*g2 factor, so the zero mode of the
    broken-U(1) cases is exact.
    """
    validate_params(p)
    coef_p, coef_q = sr_kernel_coeffs(p, omega_delta)
    w2 = np.square(np.asarray(omega, dtype=float))
    out = (w2 * w2 + coef_p * w2 + coef_q) / (
        (w2 + omega_delta * omega_delta) * (w2 + p.omega0 * p.omega0)
    )
    return out if isinstance(omega, np.ndarray) else float(out)


def kernel(p: ModelParams, beta: float, gap: GapSolution, omega: float) -> FluctuationKernel:
    """Fluctuation kernel values at one real frequency.

    h comes from the general form; it reduces to h_normal in the normal phase
    and to h_superradiant in the superradiant phase.  The component values
    r, s_plus, s_minus exist only for g1 != g2.
    """
    _check_gap(p, beta, gap)
    t = _tanh_factor(p, beta, gap)
    od = gap.omega_delta
    h = float(_h_general(p, od, t, omega))
    if p.g1 == p.g2:
        return FluctuationKernel(omega, None, None, None, h)
    ainv2 = p.g2 * p.g2 - p.g1 * p.g1   # 1/alpha^2 of the defining rotation
    a2 = 1.0 / ainv2
    od2 = od * od
    denom = omega * omega + od2
    r = 2.0 * p.omega0 * p.g1 * p.g2 * a2 - (od2 - p.Omega * p.Omega) * ainv2 * t / (2.0 * od * denom)

    def s(w: float) -> complex:
        return (
            1j * w * (1.0 - p.Omega * ainv2 * t / (od * denom))
            - p.omega0 * (p.g1 * p.g1 + p.g2 * p.g2) * a2
            + (od2 + p.Omega * p.Omega) * ainv2 * t / (2.0 * od * denom)
        )

    return FluctuationKernel(omega, r, s(omega), s(-omega), h)


def goldstone_amplitude(p: ModelParams, beta: float, gap: GapSolution) -> float:
    """Zero-mode normalization replacing the Gaussian zero-frequency factor
    when a continuous symmetry is broken (exactly one coupling vanishes)."""
    _check_gap(p, beta, gap)
    tag = classify_symmetry(p).tag
    if tag not in (SymmetryTag.U1_SUM, SymmetryTag.U1_DIFF):
        raise DomainError("goldstone_amplitude requires exactly one of g1, g2 to vanish")
    if gap.phase is not Phase.SUPERRADIANT:
        raise DomainError("no zero mode outside the superradiant phase")
    if math.isinf(beta):
        raise DomainError("goldstone_amplitude requires finite beta")
    od = gap.omega_delta
    g = p.g_sum  # the single nonzero coupling
    return (g / (od * math.sqrt(math.pi * beta * p.omega0))) * math.sqrt(
        1.0 - _x_over_sinh(beta * od)
    )


def _tail_fit(lnh: np.ndarray, wn: np.ndarray, ia: int, ib: int) -> tuple[float, float]:
    """Fit ln H ~ c2/w^2 + c4/w^4 through two evaluated frequencies.

    The fit points must be well separated (an octave apart); adjacent
    frequencies make the two basis columns nearly proportional and the
    coefficients drown in rounding noise at large cutoffs.
    """
    xa, xb = 1.0 / (wn[ia] * wn[ia]), 1.0 / (wn[ib] * wn[ib])
    mat = np.array([[xa, xa * xa], [xb, xb * xb]])
    c2, c4 = np.linalg.solve(mat, np.array([lnh[ia], lnh[ib]]))
    return float(c2), float(c4)


def log_partition_ratio(
    p: ModelParams, beta: float, n_atoms: int, cutoff: int
) -> PartitionAsymptotics:
    """ln(Z/Z0) in the thermodynamic limit, from the Matsubara product.

    The product over positive frequencies is summed up to `cutoff` terms and
    the remainder is added analytically from a c2/w^2 + c4/w^4 fit to the last
    two evaluated frequencies (the fit is re-checked one octave down).
    Normal phase: zero-frequency factor plus the product of H_I.  Superradiant
    with both couplings: an extra ln 2 and H_II.  Superradiant with one
    coupling: the zero mode is replaced by (1/2) ln N - ln A0.
    """
    validate_params(p)
    validate_beta(beta)
    if math.isinf(beta):
        raise DomainError("partition asymptotics are defined for finite beta only")
    if n_atoms < 1:
        raise DomainError(f"n_atoms must be >= 1, got {n_atoms}")
    if cutoff < 1:
        raise DomainError(f"cutoff must be >= 1, got {cutoff}")
    if p.g_sum == 0.0:
        return PartitionAsymptotics(n_atoms, 0.0, 0.0, False)
    gap = solve_gap(p, beta)
    if gap.phase is Phase.CRITICAL:
        raise DomainError("fluctuation product diverges at the critical point")
    superradiant = gap.phase is Phase.SUPERRADIANT
    goldstone = superradiant and (p.g1 == 0.0 or p.g2 == 0.0)
    if superradiant:
        phi = phi_shift(p, beta, gap).value
        h_of = lambda w: h_superradiant(p, gap.omega_delta, w)
    else:
        phi = 0.0
        h_of = lambda w: h_normal(p, beta, w)

    n = np.arange(1, cutoff + 1, dtype=float)
    wn = 2.0 * math.pi * n / beta
    hv = np.asarray(h_of(wn))
    if not np.all(np.isfinite(hv)) or np.any(hv <= 0.0):
        raise ConvergenceError("kernel values invalid inside the Matsubara sum")
    lnh = np.log(hv)
    direct = float(np.sum(lnh))

    base = beta / (2.0 * math.pi)
    tail_basis2 = base * base * float(polygamma(1, cutoff + 1))
    tail_basis4 = base ** 4 * float(polygamma(3, cutoff + 1)) / 6.0
    if cutoff >= 2:
        c2, c4 = _tail_fit(lnh, wn, max(cutoff // 2, 1) - 1, cutoff - 1)
    else:
        c2, c4 = float(lnh[0] * wn[0] * wn[0]), 0.0
    tail = c2 * tail_basis2 + c4 * tail_basis4
    if cutoff >= 8:
        c2_prev, _ = _tail_fit(lnh, wn, max(cutoff // 4, 1) - 1, cutoff // 2 - 1)
        dc = abs(c2 - c2_prev)
        if dc > 0.1 * max(abs(c2), abs(c2_prev)) and dc * tail_basis2 > 1e-10:
            raise ConvergenceError(
                f"tail coefficient unstable across octaves: {c2:.6e} vs {c2_prev:.6e}"
            )

    if goldstone:
        a0 = goldstone_amplitude(p, beta, gap)
        correction = 0.5 * math.log(n_atoms) - math.log(a0) - direct - tail
    elif superradiant:
        correction = math.log(2.0) - 0.5 * math.log(float(h_of(0.0))) - direct - tail
    else:
        correction = -0.5 * math.log(float(h_of(0.0))) - direct - tail
    return PartitionAsymptotics(n_atoms, phi, correction, goldstone)
