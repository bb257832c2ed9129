import math

import numpy as np
import pytest

from fulldicke import (
    BETA_INF,
    CapacityError,
    DomainError,
    EDConfig,
    ModelParams,
    TruncationError,
    build_hamiltonian,
    default_n_max,
    free_energy_per_atom,
    solve_gap,
    symmetry_residuals,
    thermal_observables,
)


def jc_spectrum(omega0, Omega, g1, n_max):
    """Oracle for N=1, g2=0: direct 2x2 block diagonalization.

    Blocks pair |n+1, down> with |n, up>; the truncated space leaves the
    bottom state |0, down> and the top state |n_max, up> uncoupled.
    """
    energies = [-0.5 * Omega, omega0 * n_max + 0.5 * Omega]
    for n in range(n_max):
        block = np.array(
            [
                [omega0 * (n + 1) - 0.5 * Omega, g1 * math.sqrt(n + 1)],
                [g1 * math.sqrt(n + 1), omega0 * n + 0.5 * Omega],
            ]
        )
        energies.extend(np.linalg.eigvalsh(block))
    return np.sort(np.array(energies))


def test_dimension_invariant():
    cfg = EDConfig(5, 7, ModelParams(1, 1, 0.3, 0.2), 1.0)
    h = build_hamiltonian(cfg)
    assert h.shape == ((7 + 1) * (5 + 1), (7 + 1) * (5 + 1))


def test_single_atom_free_spectrum():
    cfg = EDConfig(1, 3, ModelParams(1.0, 0.8, 0.0, 0.0), 1.0)
    h = build_hamiltonian(cfg)
    expected = np.sort([n + s * 0.4 for n in range(4) for s in (-1, 1)])
    np.testing.assert_allclose(np.linalg.eigvalsh(h), expected, atol=1e-13)


def test_single_atom_jaynes_cummings_blocks():
    omega0, Omega, g1, n_max = 1.0, 1.3, 0.7, 12
    cfg = EDConfig(1, n_max, ModelParams(omega0, Omega, g1, 0.0), 1.0)
    got = np.linalg.eigvalsh(build_hamiltonian(cfg))
    want = jc_spectrum(omega0, Omega, g1, n_max)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_hamiltonian_exactly_symmetric():
    cfg = EDConfig(4, 9, ModelParams(0.9, 1.1, 0.8, 0.5), 1.0)
    h = build_hamiltonian(cfg)
    assert np.array_equal(h, h.T)


def test_capacity_cap(monkeypatch):
    with pytest.raises(CapacityError):
        build_hamiltonian(EDConfig(200, 200, ModelParams(1, 1, 0.1, 0.1), 1.0))
    monkeypatch.setenv("DICKE_MAX_ED_DIM", "100")
    with pytest.raises(CapacityError):
        build_hamiltonian(EDConfig(10, 10, ModelParams(1, 1, 0.1, 0.1), 1.0))
    monkeypatch.setenv("DICKE_MAX_ED_DIM", "200")
    build_hamiltonian(EDConfig(10, 10, ModelParams(1, 1, 0.1, 0.1), 1.0))


@pytest.mark.parametrize(
    "g1, g2, nsum_zero, ndiff_zero",
    [
        (1.0, 0.0, True, False),
        (0.0, 1.0, False, True),
        (1.0, 1.0, False, False),
        (0.7, 0.3, False, False),
        (0.0, 0.0, True, True),
    ],
)
def test_symmetry_residuals_iff_pattern(g1, g2, nsum_zero, ndiff_zero):
    cfg = EDConfig(4, 6, ModelParams(1.0, 1.2, g1, g2), 1.0)
    parity, nsum, ndiff = symmetry_residuals(cfg)
    assert parity == 0.0
    assert (nsum == 0.0) is nsum_zero
    assert (ndiff == 0.0) is ndiff_zero


def test_parity_block_structure():
    # sorting the basis by parity eigenvalue block-diagonalizes H
    n_atoms, n_max = 3, 5
    cfg = EDConfig(n_atoms, n_max, ModelParams(1.0, 0.9, 0.8, 0.6), 1.0)
    h = build_hamiltonian(cfg)
    j = 0.5 * n_atoms
    n = np.repeat(np.arange(n_max + 1), n_atoms + 1)
    k = np.tile(np.arange(n_atoms + 1), n_max + 1)
    parity = (np.rint(n + k).astype(int)) % 2
    order = np.argsort(parity, kind="stable")
    hp = h[np.ix_(order, order)]
    n_even = int(np.sum(parity == 0))
    assert np.all(hp[:n_even, n_even:] == 0.0)
    assert np.all(hp[n_even:, :n_even] == 0.0)


def test_free_model_observables_closed_form():
    omega0, Omega, beta, n_atoms, n_max = 1.0, 1.0, 2.0, 5, 30
    cfg = EDConfig(n_atoms, n_max, ModelParams(omega0, Omega, 0.0, 0.0), beta)
    result = thermal_observables(cfg, k_gaps=2)
    z_boson = sum(math.exp(-beta * omega0 * n) for n in range(n_max + 1))
    f_expected = (
        -math.log(2.0 * math.cosh(0.5 * beta * Omega)) / beta
        - math.log(z_boson) / (beta * n_atoms)
    )
    assert math.isclose(result.free_energy_per_atom, f_expected, rel_tol=1e-12)
    n_mean = sum(n * math.exp(-beta * omega0 * n) for n in range(n_max + 1)) / z_boson
    assert math.isclose(result.photon_density, n_mean / n_atoms, rel_tol=1e-10, abs_tol=1e-12)
    assert math.isclose(result.inversion, -0.5 * math.tanh(0.5 * beta * Omega), rel_tol=1e-10)


def test_ground_state_observables():
    cfg = EDConfig(4, 20, ModelParams(1, 1, 0.3, 0.3), BETA_INF)
    result = thermal_observables(cfg, k_gaps=3)
    assert len(result.gaps) == 3
    assert all(g > 0 for g in result.gaps)
    assert 0.0 <= result.photon_density <= cfg.n_max / cfg.n_atoms
    assert -0.5 <= result.inversion <= 0.0


def test_truncation_error_when_cutoff_too_small():
    # deep superradiant state needs a large photon space
    cfg = EDConfig(8, 3, ModelParams(1, 1, 1.0, 1.0), 20.0)
    with pytest.raises(TruncationError):
        thermal_observables(cfg)


def test_free_energy_approaches_mean_field():
    p = ModelParams(1, 1, 1.0, 1.0)
    beta = 20.0
    f_mf = free_energy_per_atom(p, beta)
    errs = []
    for n_atoms in (2, 4, 8):
        cfg = EDConfig(n_atoms, default_n_max(p, beta, n_atoms), p, beta)
        errs.append(abs(thermal_observables(cfg).free_energy_per_atom - f_mf))
    assert errs[0] > errs[1] > errs[2]


def test_gaps_match_collective_spectrum_in_normal_phase():
    from fulldicke import spectrum_normal

    p = ModelParams(1, 1, 0.25, 0.25)
    collective = spectrum_normal(p, BETA_INF).energies
    cfg = EDConfig(12, 20, p, BETA_INF)
    result = thermal_observables(cfg, k_gaps=2)
    assert abs(result.gaps[0] - collective[0]) / collective[0] < 0.1
    assert abs(result.gaps[1] - collective[1]) / collective[1] < 0.1


def test_default_n_max():
    p_normal = ModelParams(1, 1, 0.2, 0.2)
    assert default_n_max(p_normal, 1.0, 10) == 16
    p_sr = ModelParams(1, 1, 1.0, 1.0)
    gap = solve_gap(p_sr, 20.0)
    expected = max(16, math.ceil(8 * 12 * gap.b0_sq) + 16)
    assert default_n_max(p_sr, 20.0, 12) == expected


def test_config_validation():
    p = ModelParams(1, 1, 0.1, 0.1)
    with pytest.raises(DomainError):
        build_hamiltonian(EDConfig(0, 5, p, 1.0))
    with pytest.raises(DomainError):
        build_hamiltonian(EDConfig(2, -1, p, 1.0))
    with pytest.raises(DomainError):
        thermal_observables(EDConfig(2, 5, p, -1.0))
