"""Finite-N exact diagonalization oracle.

Builds the Hamiltonian in the collective basis |n> x |j m> with a truncated
Fock space and computes canonical-ensemble observables and symmetry
residuals.  Ground-state quantities live in the maximal-spin sector
j = N/2; finite-temperature traces weight every spin sector with its
permutation multiplicity so that free energies are comparable with the
thermodynamic-limit results.
"""

import math
import os
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import CapacityError, DomainError, TruncationError
from .meanfield import Phase, solve_gap
from .model import ModelParams, validate_beta, validate_params

DEFAULT_MAX_DIM = 20000
_MAX_DIM_ENV = "DICKE_MAX_ED_DIM"


@dataclass(frozen=True)
class EDConfig:
    """One exact-diagonalization run: N atoms, Fock cutoff n_max, parameters
    and inverse temperature.  The maximal-spin sector has dimension
    (n_max+1)*(N+1)."""

    n_atoms: int
    n_max: int
    params: ModelParams
    beta: float


@dataclass(frozen=True)
class EDResult:
    """Thermal observables and symmetry residuals from one run.

    gaps are the lowest excitation energies of the maximal-spin sector, which
    hosts the collective modes; the residuals are Frobenius norms of the
    commutators of H with the parity, total-excitation and
    excitation-difference operators on the truncated space.
    """

    free_energy_per_atom: float
    photon_density: float
    inversion: float
    gaps: tuple[float, ...]
    parity_residual: float
    nsum_residual: float
    ndiff_residual: float


def max_dimension() -> int:
    """Configured ED dimension cap (env DICKE_MAX_ED_DIM overrides)."""
    raw = os.environ.get(_MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{_MAX_DIM_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"{_MAX_DIM_ENV} must be >= 1, got {value}")
    return value


def default_n_max(p: ModelParams, beta: float, n_atoms: int) -> int:
    """Fock cutoff heuristic: the superradiant photon number scales with N."""
    validate_params(p)
    validate_beta(beta)
    b0_sq = 0.0
    if p.g_sum > 0.0:
        gap = solve_gap(p, beta)
        if gap.phase is Phase.SUPERRADIANT:
            b0_sq = gap.b0_sq
    if b0_sq == 0.0:
        return 16
    return max(16, math.ceil(8.0 * n_atoms * b0_sq) + 16)


def _validate_config(cfg: EDConfig) -> None:
    validate_params(cfg.params)
    validate_beta(cfg.beta)
    if cfg.n_atoms < 1:
        raise DomainError(f"n_atoms must be >= 1, got {cfg.n_atoms}")
    if cfg.n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {cfg.n_max}")


def _sector_hamiltonian(p: ModelParams, n_atoms: int, n_max: int, two_j: int) -> np.ndarray:
    """Dense symmetric Hamiltonian on |n> x |j m> for one spin sector."""
    j = 0.5 * two_j
    spin_dim = two_j + 1
    boson_dim = n_max + 1
    m = np.arange(spin_dim) - j
    ladder = np.sqrt(j * (j + 1.0) - m[:-1] * (m[:-1] + 1.0))
    jp = np.zeros((spin_dim, spin_dim))
    jp[np.arange(1, spin_dim), np.arange(spin_dim - 1)] = ladder
    jm = jp.T
    b = np.zeros((boson_dim, boson_dim))
    b[np.arange(boson_dim - 1), np.arange(1, boson_dim)] = np.sqrt(
        np.arange(1, boson_dim, dtype=float)
    )
    scale = 1.0 / math.sqrt(n_atoms)
    h = (
        p.omega0 * np.kron(np.diag(np.arange(boson_dim, dtype=float)), np.eye(spin_dim))
        + p.Omega * np.kron(np.eye(boson_dim), np.diag(m))
        + p.g1 * scale * (np.kron(b, jp) + np.kron(b.T, jm))
        + p.g2 * scale * (np.kron(b, jm) + np.kron(b.T, jp))
    )
    return h


def build_hamiltonian(cfg: EDConfig) -> np.ndarray:
    """Hamiltonian of the maximal-spin sector (j = N/2), real symmetric."""
    _validate_config(cfg)
    dim = (cfg.n_max + 1) * (cfg.n_atoms + 1)
    cap = max_dimension()
    if dim > cap:
        raise CapacityError(
            f"basis dimension {dim} exceeds the cap {cap} "
            f"(set {_MAX_DIM_ENV} to raise it)"
        )
    return _sector_hamiltonian(cfg.params, cfg.n_atoms, cfg.n_max, cfg.n_atoms)


def _sector_two_js(n_atoms: int) -> range:
    # two_j runs N, N-2, ..., down to 0 (even N) or 1 (odd N)
    return range(n_atoms, -1, -2)


def _multiplicity(n_atoms: int, two_j: int) -> int:
    k = (n_atoms - two_j) // 2
    d = comb(n_atoms, k)
    if k >= 1:
        d -= comb(n_atoms, k - 1)
    return d


def _diag_quantum_numbers(n_atoms: int, n_max: int, two_j: int) -> tuple[np.ndarray, np.ndarray]:
    spin_dim = two_j + 1
    boson_dim = n_max + 1
    n = np.repeat(np.arange(boson_dim, dtype=float), spin_dim)
    m = np.tile(np.arange(spin_dim) - 0.5 * two_j, boson_dim)
    return n, m


def _free_energy_per_atom(cfg: EDConfig, n_max: int) -> float:
    """F/N from eigenvalues alone (used for the truncation check)."""
    p, n_atoms, beta = cfg.params, cfg.n_atoms, cfg.beta
    if math.isinf(beta):
        w = np.linalg.eigvalsh(_sector_hamiltonian(p, n_atoms, n_max, n_atoms))
        return float(w[0]) / n_atoms
    spectra = [
        (two_j, np.linalg.eigvalsh(_sector_hamiltonian(p, n_atoms, n_max, two_j)))
        for two_j in _sector_two_js(n_atoms)
    ]
    e0 = min(float(w[0]) for _, w in spectra)
    z = sum(
        _multiplicity(n_atoms, two_j) * float(np.sum(np.exp(-beta * (w - e0))))
        for two_j, w in spectra
    )
    return (e0 - math.log(z) / beta) / n_atoms


def symmetry_residuals(cfg: EDConfig) -> tuple[float, float, float]:
    """Frobenius norms of [H, Pi], [H, N], [H, N-] on the truncated space.

    All operators are projected onto the cutoff space before commuting, so
    the parity identity holds exactly; the excitation-sum residual vanishes
    exactly iff g2 = 0 and the difference residual iff g1 = 0.
    """
    h = build_hamiltonian(cfg)
    return _residuals_of(h, cfg.n_atoms, cfg.n_max)


def _residuals_of(h: np.ndarray, n_atoms: int, n_max: int) -> tuple[float, float, float]:
    n, m = _diag_quantum_numbers(n_atoms, n_max, n_atoms)
    # [H, D] for diagonal D has elements H_ij (d_j - d_i)
    def comm_norm(d: np.ndarray) -> float:
        return float(np.linalg.norm(h * (d[None, :] - d[:, None])))

    # parity e^{i pi (n+m)} up to a constant phase that cancels in commutators
    parity = np.where(np.rint(n + m + 0.5 * n_atoms).astype(int) % 2 == 0, 1.0, -1.0)
    return comm_norm(parity), comm_norm(n + m), comm_norm(n - m)


def thermal_observables(cfg: EDConfig, k_gaps: int = 2) -> EDResult:
    """Canonical-ensemble observables with a truncation stability check.

    At beta = inf the ground state of the maximal-spin sector is used; at
    finite beta every spin sector enters the trace with its multiplicity.
    Raises TruncationError when F/N still drifts by 1e-8 or more under a
    cutoff increase of 8.
    """
    _validate_config(cfg)
    if k_gaps < 0:
        raise DomainError(f"k_gaps must be >= 0, got {k_gaps}")
    p, n_atoms, n_max, beta = cfg.params, cfg.n_atoms, cfg.n_max, cfg.beta
    h_top = build_hamiltonian(cfg)
    residuals = _residuals_of(h_top, n_atoms, n_max)
    w_top, v_top = np.linalg.eigh(h_top)
    gaps = tuple(float(x) for x in (w_top[1 : k_gaps + 1] - w_top[0]))
    n_diag, m_diag = _diag_quantum_numbers(n_atoms, n_max, n_atoms)

    if math.isinf(beta):
        ground = v_top[:, 0]
        weight = ground * ground
        f_per_atom = float(w_top[0]) / n_atoms
        photon = float(np.dot(n_diag, weight)) / n_atoms
        inversion = float(np.dot(m_diag, weight)) / n_atoms
    else:
        z = 0.0
        n_acc = 0.0
        m_acc = 0.0
        f_acc = []
        for two_j in _sector_two_js(n_atoms):
            if two_j == n_atoms:
                w, v = w_top, v_top
                nq, mq = n_diag, m_diag
            else:
                w, v = np.linalg.eigh(_sector_hamiltonian(p, n_atoms, n_max, two_j))
                nq, mq = _diag_quantum_numbers(n_atoms, n_max, two_j)
            f_acc.append((two_j, w, (nq[:, None] * v * v).sum(axis=0), (mq[:, None] * v * v).sum(axis=0)))
        e0 = min(float(w[0]) for _, w, _, _ in f_acc)
        for two_j, w, n_means, m_means in f_acc:
            boltz = _multiplicity(n_atoms, two_j) * np.exp(-beta * (w - e0))
            z += float(np.sum(boltz))
            n_acc += float(np.dot(boltz, n_means))
            m_acc += float(np.dot(boltz, m_means))
        f_per_atom = (e0 - math.log(z) / beta) / n_atoms
        photon = n_acc / z / n_atoms
        inversion = m_acc / z / n_atoms

    f_refined = _free_energy_per_atom(cfg, n_max + 8)
    drift = abs(f_refined - f_per_atom)
    if drift >= 1e-8:
        raise TruncationError(
            f"F/N drifts by {drift:.3e} when n_max grows from {n_max} to "
            f"{n_max + 8}; raise n_max"
        )
    return EDResult(f_per_atom, photon, inversion, gaps, *residuals)
