import math

import pytest

from fulldicke import DomainError, ModelParams, SymmetryTag, classify_symmetry, validate_beta, validate_params


def test_validate_accepts_interior_point():
    p = ModelParams(1.0, 1.0, 0.5, 0.5)
    assert validate_params(p) is p


@pytest.mark.parametrize(
    "params",
    [
        ModelParams(0.0, 1.0, 0.5, 0.5),
        ModelParams(-1.0, 1.0, 0.0, 0.0),
        ModelParams(1.0, 0.0, 0.5, 0.5),
        ModelParams(1.0, 1.0, -0.1, 0.0),
        ModelParams(1.0, 1.0, 0.0, -1e-300),
        ModelParams(math.nan, 1.0, 0.0, 0.0),
        ModelParams(1.0, math.inf, 0.0, 0.0),
        ModelParams(1.0, 1.0, math.nan, 0.0),
    ],
)
def test_validate_rejects_bad_params(params):
    with pytest.raises(DomainError):
        validate_params(params)


def test_validate_is_idempotent():
    p = ModelParams(2.0, 0.5, 0.0, 1.25)
    assert validate_params(validate_params(p)) is p


def test_validate_beta():
    assert validate_beta(2.5) == 2.5
    assert validate_beta(math.inf) == math.inf
    for bad in (0.0, -1.0, math.nan, -math.inf):
        with pytest.raises(DomainError):
            validate_beta(bad)


@pytest.mark.parametrize(
    "g1, g2, tag, conserved",
    [
        (1.0, 0.0, SymmetryTag.U1_SUM, "n+m"),
        (0.0, 1.0, SymmetryTag.U1_DIFF, "n-m"),
        (1.0, 1.0, SymmetryTag.Z2_ONLY, "parity"),
        (0.0, 0.0, SymmetryTag.FREE, "all"),
    ],
)
def test_classify_symmetry_cases(g1, g2, tag, conserved):
    sym = classify_symmetry(ModelParams(1.0, 1.0, g1, g2))
    assert sym.tag is tag
    assert sym.conserved == conserved


def test_classification_depends_only_on_zero_pattern():
    # total on validated params, same class across coupling magnitudes
    magnitudes = (1e-300, 1e-9, 0.3, 7.0, 1e9)
    for g in magnitudes:
        assert classify_symmetry(ModelParams(0.2, 5.0, g, 0.0)).tag is SymmetryTag.U1_SUM
        assert classify_symmetry(ModelParams(3.0, 0.1, 0.0, g)).tag is SymmetryTag.U1_DIFF
        for h in magnitudes:
            assert classify_symmetry(ModelParams(1.0, 1.0, g, h)).tag is SymmetryTag.Z2_ONLY


def test_no_epsilon_snapping_of_couplings():
    # only an exact zero changes the symmetry class
    assert classify_symmetry(ModelParams(1, 1, 1.0, 1e-15)).tag is SymmetryTag.Z2_ONLY
