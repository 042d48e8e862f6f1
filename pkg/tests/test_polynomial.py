import pytest

from app.core.exceptions import PolynomialError
from app.qmc.polynomial import (
    PolyZb,
    is_irreducible,
    monic_polynomials,
    poly_divmod,
    poly_mod,
    smallest_irreducible,
)


def test_multiplicative_identity():
    """p * 1 = p."""
    p = PolyZb(3, (2, 0, 1, 1))
    assert p * PolyZb.one(3) == p


def test_mod_by_linear_factor():
    """(x^2 + x + 1) mod (x + 1) = 1 over F_2."""
    assert poly_mod(PolyZb(2, (1, 1, 1)), PolyZb(2, (1, 1))) == PolyZb.one(2)


def test_divmod_identity(rng):
    """divisor * quotient + remainder reproduces the dividend."""
    for b in (2, 3, 5):
        for _ in range(50):
            p1 = PolyZb(b, tuple(int(v) for v in rng.integers(0, b, size=7)))
            p2 = PolyZb(b, tuple(int(v) for v in rng.integers(0, b, size=4)))
            if p2.is_zero():
                continue
            quot, rem = poly_divmod(p1, p2)
            assert p2 * quot + rem == p1
            assert rem.degree < p2.degree


def test_division_by_zero():
    """Dividing by the zero polynomial raises."""
    with pytest.raises(PolynomialError):
        divmod(PolyZb(2, (1, 1)), PolyZb.zero(2))


def test_trailing_zeros_are_stripped():
    """Coefficients are reduced mod b and normalized."""
    p = PolyZb(3, (4, 0, 3))
    assert p.coeffs == (1,)
    assert p.degree == 0
    assert PolyZb.zero(3).degree == -1


def test_integer_encoding():
    """from_int and to_int are inverse digit encodings."""
    p = PolyZb.from_int(11, 2)
    assert p.coeffs == (1, 1, 0, 1)
    assert p.to_int() == 11


def test_irreducibility_examples():
    """x^2 + x + 1 is irreducible over F_2, x^2 + 1 = (x + 1)^2 is not."""
    assert is_irreducible(PolyZb(2, (1, 1, 1)))
    assert not is_irreducible(PolyZb(2, (1, 0, 1)))
    assert is_irreducible(PolyZb(2, (0, 1)))


def test_irreducible_counts():
    """There are 2 irreducible cubics over F_2 and 8 monic irreducible cubics over F_3."""
    assert sum(is_irreducible(p) for p in monic_polynomials(2, 3)) == 2
    assert sum(is_irreducible(p) for p in monic_polynomials(3, 3)) == 8


def test_smallest_irreducible():
    """The default modulus is the irreducible with the smallest encoding."""
    assert smallest_irreducible(2, 2) == PolyZb(2, (1, 1, 1))
    assert smallest_irreducible(2, 3) == PolyZb(2, (1, 1, 0, 1))
    assert smallest_irreducible(3, 1) == PolyZb(3, (0, 1))
