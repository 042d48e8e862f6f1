"""
Polynomials over Z_b for a prime base b.

Coefficients are stored constant term first with trailing zeros stripped,
so the zero polynomial has an empty coefficient tuple and degree -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from app.core.exceptions import PolynomialError


@lru_cache(maxsize=None)
def is_prime(b: int) -> bool:
    if b < 2:
        return False
    i = 2
    while i * i <= b:
        if b % i == 0:
            return False
        i += 1
    return True


def _strip(coeffs: Sequence[int], b: int) -> tuple[int, ...]:
    out = [int(c) % b for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class PolyZb:
    """Polynomial over Z_b, coefficient vector constant term first."""

    b: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.b < 2:
            raise PolynomialError(f"base must be >= 2, got {self.b}")
        object.__setattr__(self, "coeffs", _strip(self.coeffs, self.b))

    @classmethod
    def zero(cls, b: int) -> "PolyZb":
        return cls(b, ())

    @classmethod
    def one(cls, b: int) -> "PolyZb":
        return cls(b, (1,))

    @classmethod
    def monomial(cls, b: int, degree: int, coeff: int = 1) -> "PolyZb":
        return cls(b, (0,) * degree + (coeff,))

    @classmethod
    def from_int(cls, value: int, b: int) -> "PolyZb":
        """Polynomial whose coefficients are the base-b digits of value."""
        digits = []
        while value > 0:
            value, d = divmod(value, b)
            digits.append(d)
        return cls(b, tuple(digits))

    def to_int(self) -> int:
        return sum(c * self.b**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def padded(self, length: int) -> tuple[int, ...]:
        """Coefficients constant term first, zero padded to length."""
        return self.coeffs + (0,) * (length - len(self.coeffs))

    def _check(self, other: "PolyZb") -> None:
        if self.b != other.b:
            raise PolynomialError(f"base mismatch: {self.b} vs {other.b}")

    def __add__(self, other: "PolyZb") -> "PolyZb":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyZb(self.b, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __neg__(self) -> "PolyZb":
        return PolyZb(self.b, [-c for c in self.coeffs])

    def __sub__(self, other: "PolyZb") -> "PolyZb":
        return self + (-other)

    def __mul__(self, other: "PolyZb") -> "PolyZb":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return PolyZb.zero(self.b)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, c in enumerate(other.coeffs):
                out[i + j] += a * c
        return PolyZb(self.b, out)

    def scale(self, c: int) -> "PolyZb":
        return PolyZb(self.b, [c * a for a in self.coeffs])

    def __divmod__(self, divisor: "PolyZb") -> tuple["PolyZb", "PolyZb"]:
        self._check(divisor)
        if divisor.is_zero():
            raise PolynomialError("division by the zero polynomial")
        if not is_prime(self.b):
            raise PolynomialError(f"division requires a prime base, got {self.b}")
        inv = pow(divisor.leading, -1, self.b)
        rem = list(self.coeffs)
        dd = divisor.degree
        quot = [0] * max(len(rem) - dd, 0)
        for shift in range(len(rem) - 1 - dd, -1, -1):
            c = rem[shift + dd] * inv % self.b
            if c == 0:
                continue
            quot[shift] = c
            for i, a in enumerate(divisor.coeffs):
                rem[shift + i] = (rem[shift + i] - c * a) % self.b
        return PolyZb(self.b, quot), PolyZb(self.b, rem[:dd] if dd > 0 else [])

    def __mod__(self, divisor: "PolyZb") -> "PolyZb":
        return divmod(self, divisor)[1]

    def __floordiv__(self, divisor: "PolyZb") -> "PolyZb":
        return divmod(self, divisor)[0]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def poly_add(p1: PolyZb, p2: PolyZb) -> PolyZb:
    return p1 + p2


def poly_mul(p1: PolyZb, p2: PolyZb) -> PolyZb:
    return p1 * p2


def poly_mod(p1: PolyZb, p2: PolyZb) -> PolyZb:
    return p1 % p2


def poly_divmod(p1: PolyZb, p2: PolyZb) -> tuple[PolyZb, PolyZb]:
    return divmod(p1, p2)


def polynomials_below(b: int, n: int) -> Iterator[PolyZb]:
    """All polynomials of degree < n, ordered by their integer encoding."""
    for value in range(b**n):
        yield PolyZb.from_int(value, b)


def monic_polynomials(b: int, degree: int) -> Iterator[PolyZb]:
    for low in range(b**degree):
        yield PolyZb(b, PolyZb.from_int(low, b).padded(degree) + (1,))


def is_irreducible(p: PolyZb) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(p)//2."""
    if p.degree < 1:
        raise PolynomialError("irreducibility is defined for degree >= 1")
    if not is_prime(p.b):
        raise PolynomialError(f"irreducibility test requires a prime base, got {p.b}")
    for d in range(1, p.degree // 2 + 1):
        for f in monic_polynomials(p.b, d):
            if (p % f).is_zero():
                return False
    return True


def smallest_irreducible(b: int, degree: int) -> PolyZb:
    """Monic irreducible of the given degree with the smallest integer encoding."""
    for p in monic_polynomials(b, degree):
        if is_irreducible(p):
            return p
    raise PolynomialError(f"no irreducible polynomial of degree {degree} over Z_{b}")

