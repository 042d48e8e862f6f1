"""
b-adic Walsh functions on [0,1]^s and characters on G^s.

Values are carried as exponents of the primitive root omega_b; conversion
to complex numbers happens only when results are accumulated.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import DigitRangeError, IncompatibleError, IndexBoundError, check_guard
from app.qmc.digits import DigitVector, digit_matrix, expand, sigma

Real = Union[float, Fraction]


@dataclass(frozen=True)
class RootOfUnityPower:
    """omega_b ** exponent with omega_b = exp(2 pi i / b)."""

    b: int
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.b)

    def __mul__(self, other: "RootOfUnityPower") -> "RootOfUnityPower":
        if self.b != other.b:
            raise IncompatibleError(f"roots of unity of orders {self.b} and {other.b}")
        return RootOfUnityPower(self.b, self.exponent + other.exponent)

    def conjugate(self) -> "RootOfUnityPower":
        return RootOfUnityPower(self.b, -self.exponent)

    @property
    def value(self) -> complex:
        return root_of_unity(self.b, self.exponent)


def root_of_unity(b: int, exponent) -> complex:
    return cmath.exp(2j * cmath.pi * (exponent % b) / b)


def root_table(b: int) -> np.ndarray:
    """omega_b ** e for e = 0..b-1; exact signs for b = 2."""
    if b == 2:
        return np.array([1.0 + 0j, -1.0 + 0j])
    return np.exp(2j * np.pi * np.arange(b) / b)


def _as_vector(k) -> tuple[int, ...]:
    if isinstance(k, (int, np.integer)):
        return (int(k),)
    return tuple(int(x) for x in k)


def wal(k: int, x: Real, b: int) -> RootOfUnityPower:
    """wal_k(x) via the terminating b-adic expansion of x."""
    if not 0 <= x <= 1:
        raise DigitRangeError(f"x must lie in [0, 1], got {x}")
    kappa = expand(k, b).digits
    if not kappa:
        return RootOfUnityPower(b, 0)
    xi = sigma(x, b, len(kappa)).digits
    return RootOfUnityPower(b, sum(c * d for c, d in zip(kappa, xi)))


def wal_vector(k: Sequence[int], x: Sequence[Real], b: int) -> RootOfUnityPower:
    """Product of one-dimensional Walsh functions over the coordinates."""
    k, x = _as_vector(k), tuple(x)
    if len(k) != len(x):
        raise IncompatibleError(f"index of length {len(k)} for a point of length {len(x)}")
    exponent = sum(wal(kj, xj, b).exponent for kj, xj in zip(k, x))
    return RootOfUnityPower(b, exponent)


def chi(k: int, z: DigitVector) -> RootOfUnityPower:
    """Character chi_k(z) = omega_b ** (kappa_0 zeta_1 + kappa_1 zeta_2 + ...)."""
    kappa = expand(k, z.base).digits
    if len(kappa) > z.depth:
        raise IndexBoundError(f"index {k} needs {len(kappa)} digits, depth is {z.depth}")
    return RootOfUnityPower(z.base, sum(c * z.digits[i] for i, c in enumerate(kappa)))


def chi_vector(k: Sequence[int], z: Sequence[DigitVector]) -> RootOfUnityPower:
    k = _as_vector(k)
    if len(k) != len(z):
        raise IncompatibleError(f"index of length {len(k)} for a point of length {len(z)}")
    b = z[0].base
    return RootOfUnityPower(b, sum(chi(kj, zj).exponent for kj, zj in zip(k, z)))


def character_sum(
    points: Sequence[Sequence[DigitVector]], k: Sequence[int]
) -> tuple[list[int], complex]:
    """
    Sum of chi_k over a point multiset: exponent histogram and its complex
    value. The histogram keeps the result exact.
    """
    if not points:
        raise IncompatibleError("character sum over an empty point set")
    b = points[0][0].base
    counts = [0] * b
    for z in points:
        counts[chi_vector(k, z).exponent] += 1
    roots = root_table(b)
    return counts, complex(sum(c * roots[e] for e, c in enumerate(counts)))


def grid_exponents(k: Sequence[int], b: int, resolution: int) -> np.ndarray:
    """
    Exponent of wal_k at every left endpoint of the b^-K grid in [0,1]^s,
    flattened in C order (first coordinate most significant).
    """
    k = _as_vector(k)
    s = len(k)
    cells = b**resolution
    if any(kj >= cells for kj in k):
        raise IndexBoundError(f"Walsh index {k} exceeds grid resolution b^{resolution}")
    # digit i (least significant first) of cell index j is xi_{K-i}
    cell_digits = digit_matrix(cells, resolution, b)
    per_axis = []
    for kj in k:
        kappa_digits = expand(kj, b).digits
        kappa = np.array(kappa_digits + (0,) * (resolution - len(kappa_digits)), dtype=np.int64)
        xi = cell_digits[:, ::-1]
        per_axis.append((xi @ kappa) % b)
    total = np.zeros((cells,) * s, dtype=np.int64)
    for axis, e in enumerate(per_axis):
        shape = [1] * s
        shape[axis] = cells
        total = total + e.reshape(shape)
    return (total % b).reshape(-1)


def grid_points(s: int, b: int, resolution: int) -> np.ndarray:
    """Left endpoints (j_1/b^K, ..., j_s/b^K) in C order."""
    cells = b**resolution
    axes = np.meshgrid(*([np.arange(cells) / cells] * s), indexing="ij")
    return np.stack([a.reshape(-1) for a in axes], axis=1)


def walsh_coefficient_oracle(
    f: Callable[[np.ndarray], np.ndarray], k: Sequence[int], b: int, resolution: int
) -> complex:
    """
    Left-endpoint grid quadrature of f * conj(wal_k) on the b^-K grid.

    f maps an (N, s) array of points to N values. The result is exact for
    functions that are constant on grid cells.
    """
    k = _as_vector(k)
    s = len(k)
    check_guard(b ** (s * resolution), settings.MAX_ENUMERATION, "Walsh quadrature grid")
    values = np.asarray(f(grid_points(s, b, resolution)))
    roots = root_table(b)
    weights = roots[(-grid_exponents(k, b, resolution)) % b]
    return complex(np.mean(values * weights))
