from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from app.core.exceptions import DigitRangeError, EnumerationLimitError, IndexBoundError
from app.qmc.digits import DigitVector, const_vector, sigma
from app.qmc.integration import TestFunction
from app.qmc.walsh import (
    RootOfUnityPower,
    chi,
    chi_vector,
    wal,
    wal_vector,
    walsh_coefficient_oracle,
)


def test_root_of_unity_arithmetic():
    """Exponents add mod b and values lie on the unit circle."""
    w = RootOfUnityPower(3, 2) * RootOfUnityPower(3, 2)
    assert w.exponent == 1
    assert abs(w.value) == pytest.approx(1.0)
    assert (w * w.conjugate()).exponent == 0


def test_wal_examples():
    """wal_0 = 1; wal_1 reads the first digit."""
    assert wal(0, 0.3, 2).exponent == 0
    assert wal(1, 0.25, 2).exponent == 0
    assert wal(1, 0.75, 2).exponent == 1
    assert wal(1, Fraction(2, 3), 3).exponent == 2


def test_wal_rejects_out_of_range():
    """Walsh functions live on [0, 1]."""
    with pytest.raises(DigitRangeError):
        wal(1, 1.25, 2)


def test_wal_vector_is_product():
    """The s-dimensional Walsh function multiplies coordinate values."""
    x = (Fraction(1, 4), Fraction(5, 8))
    k = (3, 5)
    expected = (wal(3, x[0], 2).exponent + wal(5, x[1], 2).exponent) % 2
    assert wal_vector(k, x, 2).exponent == expected


def test_wal_piecewise_constant():
    """wal_k with k < b^a only depends on the first a digits."""
    b, a = 3, 2
    for k in range(b**a):
        for cell in range(b**a):
            left = Fraction(cell, b**a)
            inside = left + Fraction(1, b ** (a + 2))
            assert wal(k, left, b) == wal(k, inside, b)


def test_chi_examples():
    """chi_0 = 1 and chi_1(e_1) = -1 for b = 2."""
    z = DigitVector(2, (1, 0, 1), 0)
    assert chi(0, z).exponent == 0
    assert chi(1, const_vector(1, 2, 4)).value == pytest.approx(-1.0)


def test_chi_is_a_homomorphism(rng):
    """chi_k(z + w) = chi_k(z) chi_k(w)."""
    for b in (2, 3, 5):
        for _ in range(40):
            z = DigitVector(b, tuple(int(v) for v in rng.integers(0, b, 6)), int(rng.integers(0, b)))
            w = DigitVector(b, tuple(int(v) for v in rng.integers(0, b, 6)), int(rng.integers(0, b)))
            k = int(rng.integers(0, b**6))
            assert chi(k, z + w) == chi(k, z) * chi(k, w)


def test_chi_matches_wal(rng):
    """chi_k(sigma(x)) = wal_k(x) for b-adic rationals x."""
    for b in (2, 3):
        for _ in range(40):
            x = Fraction(int(rng.integers(0, b**6)), b**6)
            k = int(rng.integers(0, b**6))
            assert chi(k, sigma(x, b, 6)) == wal(k, x, b)


def test_chi_needs_enough_depth():
    """Indices with more digits than the depth are rejected."""
    with pytest.raises(IndexBoundError):
        chi(16, DigitVector(2, (0, 0, 0), 0))


def test_character_sum_over_small_cubes():
    """sum over k_j < b^n of chi_k(z) is b^(sn) if z starts with n zero digits, else 0."""
    b, depth = 2, 4
    for s in (1, 2):
        for n in (1, 2, 3):
            indices = list(product(range(b**n), repeat=s))
            for digits in product(product(range(b), repeat=depth), repeat=s):
                z = tuple(DigitVector(b, d, 0) for d in digits)
                total = sum(chi_vector(k, z).value for k in indices)
                inside = all(not any(d[:n]) for d in digits)
                assert total == pytest.approx(b ** (s * n) if inside else 0.0, abs=1e-9)


def _walsh(b, l):
    return TestFunction.walsh_poly(b, [(l, 1.0)]).evaluate


def test_oracle_normalization():
    """The constant function has coefficient 1 at k = 0."""
    assert walsh_coefficient_oracle(lambda x: np.ones(len(x)), (0,), 2, 3) == pytest.approx(1.0)


def test_oracle_orthonormality():
    """The grid oracle returns [k = l] exactly for Walsh functions."""
    for b, K, s in ((2, 3, 1), (3, 2, 1), (2, 2, 2)):
        indices = list(product(range(b**K), repeat=s))
        for l in indices:
            f = _walsh(b, l)
            for k in indices:
                value = walsh_coefficient_oracle(f, k, b, K)
                assert value == pytest.approx(1.0 if k == l else 0.0, abs=1e-12)


def test_oracle_guard():
    """Oversized quadrature grids trip the enumeration guard."""
    with pytest.raises(EnumerationLimitError):
        walsh_coefficient_oracle(lambda x: np.ones(len(x)), (0, 0, 0), 2, 10)
