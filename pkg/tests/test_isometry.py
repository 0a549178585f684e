"""Exact rational isometries of the signature metric."""

from fractions import Fraction

import numpy as np
import pytest

from zmckit.isometry import (
    apply_to_poly,
    as_float,
    boost_exact,
    is_exact_isometry,
    matmul_exact,
    random_exact_isometry,
    rotation_exact,
)
from zmckit.parser import parse_poly
from zmckit.zmc import AmbientSig


def test_rotation_preserves_metric_exactly():
    sig = AmbientSig(2, -1, 4)
    m = rotation_exact(sig, 3, 4, Fraction(1, 3))
    assert is_exact_isometry(m, sig)
    m = rotation_exact(sig, 1, 2, Fraction(-2, 5))
    assert is_exact_isometry(m, sig)


def test_boost_preserves_metric_exactly():
    sig = AmbientSig(2, -1, 4)
    m = boost_exact(sig, 2, 3, Fraction(1, 2))
    assert is_exact_isometry(m, sig)


def test_rotation_rejects_mixed_signs():
    sig = AmbientSig(2, -1, 4)
    with pytest.raises(ValueError, match="different metric signs"):
        rotation_exact(sig, 2, 3, Fraction(1, 2))
    with pytest.raises(ValueError, match="same metric sign"):
        boost_exact(sig, 3, 4, Fraction(1, 2))
    with pytest.raises(ValueError, match="< 1"):
        boost_exact(sig, 1, 3, Fraction(3, 2))


def test_random_words_stay_isometries():
    rng = np.random.default_rng(3)
    for s in (0, 1, 2):
        sig = AmbientSig(s, 1, 5)
        for _ in range(5):
            m = random_exact_isometry(sig, rng, steps=5)
            assert is_exact_isometry(m, sig)


def test_composition_is_isometry():
    sig = AmbientSig(1, 1, 3)
    m = matmul_exact(
        rotation_exact(sig, 2, 3, Fraction(1, 4)),
        boost_exact(sig, 1, 2, Fraction(2, 7)),
    )
    assert is_exact_isometry(m, sig)


def test_apply_to_poly_euclidean_rotation():
    # 3-4-5 rotation of x1^2 + x2^2 leaves it unchanged.
    sig = AmbientSig(0, 1, 2)
    m = rotation_exact(sig, 1, 2, Fraction(1, 2))  # cos 3/5, sin 4/5
    f = parse_poly("x1^2 + x2^2", 2)
    assert apply_to_poly(f, m) == f


def test_float_view_is_orthonormal_numerically():
    sig = AmbientSig(2, -1, 6)
    rng = np.random.default_rng(11)
    m = as_float(random_exact_isometry(sig, rng, steps=6))
    b = np.diag([-1.0, -1.0, 1.0, 1.0, 1.0, 1.0])
    assert np.max(np.abs(m.T @ b @ m - b)) < 1e-12
