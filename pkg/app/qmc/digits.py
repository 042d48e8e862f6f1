"""
Base-b digit arithmetic and the group G at finite depth.

An element of G is stored as W explicit digits plus a constant tail digit
repeated at every deeper position, which makes the constant elements
e_l = (l, l, ...) and their translates exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from app.core.exceptions import DigitRangeError, IncompatibleError, ParameterError
from app.qmc.polynomial import PolyZb

IndexLike = Union[int, Sequence[int]]


def _check_base(b: int) -> None:
    if b < 2:
        raise ParameterError(f"base must be >= 2, got {b}")


@dataclass(frozen=True)
class IndexExpansion:
    """Digits kappa_0, kappa_1, ... of a nonnegative integer k in base b."""

    k: int
    b: int
    digits: tuple[int, ...]

    def recompose(self) -> int:
        return recompose(self.digits, self.b)

    def __len__(self) -> int:
        return len(self.digits)


@dataclass(frozen=True)
class DigitVector:
    """Point of G truncated at depth W; digit i is the coefficient of b^-(i+1)."""

    base: int
    digits: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        _check_base(self.base)
        if not self.digits:
            raise DigitRangeError("a DigitVector needs depth >= 1")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if any(d < 0 or d >= self.base for d in self.digits):
            raise DigitRangeError(f"digits must lie in 0..{self.base - 1}: {self.digits}")
        if not 0 <= self.tail < self.base:
            raise DigitRangeError(f"tail must lie in 0..{self.base - 1}, got {self.tail}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def digit(self, i: int) -> int:
        """Digit at 0-based position i, the tail beyond the explicit window."""
        return self.digits[i] if i < len(self.digits) else self.tail

    def key(self) -> tuple[int, ...]:
        """Sort/compare key covering digits and tail."""
        return self.digits + (self.tail,)

    def __add__(self, other: "DigitVector") -> "DigitVector":
        return gadd(self, other)

    def __sub__(self, other: "DigitVector") -> "DigitVector":
        return gsub(self, other)

    def __neg__(self) -> "DigitVector":
        return gneg(self)


def expand(k: int, b: int) -> IndexExpansion:
    """Minimal-length base-b digit list of k, least significant first."""
    _check_base(b)
    if k < 0:
        raise ParameterError(f"index must be nonnegative, got {k}")
    digits = []
    value = k
    while value > 0:
        value, d = divmod(value, b)
        digits.append(d)
    return IndexExpansion(k=k, b=b, digits=tuple(digits))


def recompose(digits: Sequence[int], b: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * b + d
    return value


def _as_tuple(k: IndexLike) -> tuple[int, ...]:
    if isinstance(k, (int, np.integer)):
        return (int(k),)
    return tuple(int(x) for x in k)


def delta(k: IndexLike, b: int) -> int:
    """Sum of base-b digits mod b; componentwise sum for vectors."""
    _check_base(b)
    return sum(sum(expand(kj, b).digits) for kj in _as_tuple(k)) % b


def _mu_scalar(k: int, alpha: int, b: int) -> int:
    digits = expand(k, b).digits
    positions = [i + 1 for i in range(len(digits) - 1, -1, -1) if digits[i] != 0]
    return sum(positions[:alpha])


def mu_alpha(k: IndexLike, alpha: int, b: int) -> int:
    """Sum of the min(v, alpha) largest nonzero-digit positions (1-based)."""
    _check_base(b)
    if alpha < 1:
        raise ParameterError(f"alpha must be >= 1, got {alpha}")
    return sum(_mu_scalar(kj, alpha, b) for kj in _as_tuple(k))


def digit_matrix(n_values: int, n_digits: int, b: int) -> np.ndarray:
    """Row k holds the first n_digits base-b digits of k, least significant first."""
    k = np.arange(n_values, dtype=np.int64)
    out = np.empty((n_values, n_digits), dtype=np.int64)
    for i in range(n_digits):
        out[:, i] = k % b
        k = k // b
    return out


def delta_table(n_values: int, b: int) -> np.ndarray:
    """delta(k) for every k < n_values."""
    n_digits = max(len(expand(max(n_values - 1, 0), b)), 1)
    return digit_matrix(n_values, n_digits, b).sum(axis=1) % b


def mu_alpha_table(n_values: int, alpha: int, b: int) -> np.ndarray:
    """mu_alpha(k) for every k < n_values."""
    n_digits = max(len(expand(max(n_values - 1, 0), b)), 1)
    digits = digit_matrix(n_values, n_digits, b)
    mu = np.zeros(n_values, dtype=np.int64)
    taken = np.zeros(n_values, dtype=np.int64)
    for i in range(n_digits - 1, -1, -1):
        use = (digits[:, i] != 0) & (taken < alpha)
        mu += np.where(use, i + 1, 0)
        taken += use
    return mu


def pi_exact(z: DigitVector) -> Fraction:
    """Exact value of pi(z), including the geometric series of the tail."""
    b, w = z.base, z.depth
    numerator = recompose(tuple(reversed(z.digits)), b)
    return Fraction(numerator * (b - 1) + z.tail, (b - 1) * b**w)


def pi(z: DigitVector) -> float:
    """pi(z) = sum_i zeta_i b^-i, correctly rounded to binary64."""
    return float(pi_exact(z))


def sigma(x: Union[float, Fraction], b: int, w: int) -> DigitVector:
    """
    First w digits of the terminating b-adic expansion of x; x = 1 maps to
    the all-(b-1) element.
    """
    _check_base(b)
    value = Fraction(x)
    if value < 0 or value > 1:
        raise DigitRangeError(f"x must lie in [0, 1], got {x}")
    if value == 1:
        return DigitVector(b, (b - 1,) * w, b - 1)
    digits = []
    for _ in range(w):
        value *= b
        d = value.numerator // value.denominator
        digits.append(d)
        value -= d
    return DigitVector(b, tuple(digits), 0)


def _check_compatible(z: DigitVector, w: DigitVector) -> None:
    if z.base != w.base or z.depth != w.depth:
        raise IncompatibleError(
            f"cannot combine base {z.base}/depth {z.depth} with base {w.base}/depth {w.depth}"
        )


def gadd(z: DigitVector, w: DigitVector) -> DigitVector:
    """Digitwise addition mod b, tails included."""
    _check_compatible(z, w)
    b = z.base
    return DigitVector(
        b, tuple((x + y) % b for x, y in zip(z.digits, w.digits)), (z.tail + w.tail) % b
    )


def gneg(z: DigitVector) -> DigitVector:
    b = z.base
    return DigitVector(b, tuple((-x) % b for x in z.digits), (-z.tail) % b)


def gsub(z: DigitVector, w: DigitVector) -> DigitVector:
    return gadd(z, gneg(w))


def zero_vector(b: int, w: int) -> DigitVector:
    return DigitVector(b, (0,) * w, 0)


def const_vector(l: int, b: int, w: int) -> DigitVector:
    """The constant element e_l = (l, l, ...)."""
    return DigitVector(b, (l % b,) * w, l % b)


def truncate_poly(k: int, n: int, b: int) -> PolyZb:
    """tr_n(k): polynomial whose coefficients are the first n base-b digits of k."""
    if n < 1:
        raise ParameterError(f"truncation length must be >= 1, got {n}")
    return PolyZb(b, expand(k, b).digits[:n])
