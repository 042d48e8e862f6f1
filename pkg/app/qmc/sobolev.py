"""
Reproducing kernel of the weighted Sobolev space H_{alpha,gamma} and exact
worst-case errors of finite point sets.

Both the kernel and its one-dimensional integrals vanish in the Bernoulli
terms, so for any multiset P

    e(P)^2 = (1/|P|^2) sum_{x,y in P} K(x, y) - 1.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from app.core.config import settings
from app.core.exceptions import DigitRangeError, IncompatibleError, ParameterError, check_guard
from app.qmc.net import DigitalNet, antithetic, dual_contains, to_array
from app.qmc.walsh import grid_exponents, root_table
from app.qmc.weights import Weights

logger = logging.getLogger(__name__)

_BLOCK = 512


@lru_cache(maxsize=None)
def bernoulli_numbers(r: int) -> tuple[Fraction, ...]:
    """B_0, ..., B_r with B_1 = -1/2."""
    numbers = [Fraction(1)]
    for n in range(1, r + 1):
        numbers.append(-sum(math.comb(n + 1, k) * numbers[k] for k in range(n)) / (n + 1))
    return tuple(numbers)


@dataclass(frozen=True)
class BernoulliPoly:
    """B_r(x) = sum_i coeffs[i] x^i with exact rational coefficients."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, x):
        if isinstance(x, Fraction):
            return sum(c * x**i for i, c in enumerate(self.coeffs))
        return np.polynomial.polynomial.polyval(x, self.float_coeffs)

    @property
    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def derivative(self) -> tuple[Fraction, ...]:
        return tuple(i * c for i, c in enumerate(self.coeffs))[1:]

    def integral(self) -> Fraction:
        """Integral over [0, 1]."""
        return sum(c / (i + 1) for i, c in enumerate(self.coeffs))


@lru_cache(maxsize=None)
def bernoulli(r: int) -> BernoulliPoly:
    if r < 0:
        raise ParameterError(f"Bernoulli polynomial degree must be >= 0, got {r}")
    numbers = bernoulli_numbers(r)
    coeffs = tuple(math.comb(r, k) * numbers[r - k] for k in range(r + 1))
    return BernoulliPoly(degree=r, coeffs=coeffs)


@dataclass(frozen=True)
class SobolevSpaceParams:
    alpha: int
    weights: Weights

    def __post_init__(self):
        if self.alpha < 2:
            raise ParameterError(f"alpha must be >= 2, got {self.alpha}")

    @property
    def s(self) -> int:
        return self.weights.s


def _check_unit(x: np.ndarray) -> None:
    if x.size and (np.min(x) < 0 or np.max(x) > 1):
        raise DigitRangeError("kernel arguments must lie in [0, 1]")


def kernel_factor(alpha: int, x, y):
    """
    The one-dimensional factor
    sum_{r=1}^alpha B_r(x) B_r(y) / (r!)^2 + (-1)^(alpha+1) B_{2 alpha}(|x - y|) / (2 alpha)!,
    broadcasting over x and y.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros(np.broadcast(x, y).shape)
    for r in range(1, alpha + 1):
        br = bernoulli(r)
        out += br(x) * br(y) / math.factorial(r) ** 2
    sign = -1.0 if alpha % 2 == 0 else 1.0
    out += sign * bernoulli(2 * alpha)(np.abs(x - y)) / math.factorial(2 * alpha)
    return out


def _combine(weights: Weights, factors: Sequence[np.ndarray]) -> np.ndarray:
    """Assemble K from per-coordinate factor arrays of a common shape."""
    if weights.is_product:
        out = np.ones_like(factors[0])
        for g, f in zip(weights.product, factors):
            out *= 1.0 + g * f
        return out
    out = np.ones_like(factors[0])
    for u, g in weights.subsets():
        term = np.full_like(factors[0], g)
        for j in u:
            term *= factors[j]
        out += term
    return out


def kernel(params: SobolevSpaceParams, x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if len(x) != params.s or len(y) != params.s:
        raise IncompatibleError(f"points must have {params.s} coordinates")
    _check_unit(x)
    _check_unit(y)
    factors = [kernel_factor(params.alpha, x[j], y[j]).reshape(1) for j in range(params.s)]
    return float(_combine(params.weights, factors)[0])


def kernel_matrix(params: SobolevSpaceParams, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """K(x_i, y_j) for all pairs of rows."""
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    ys = np.atleast_2d(np.asarray(ys, dtype=np.float64))
    if xs.shape[1] != params.s or ys.shape[1] != params.s:
        raise IncompatibleError(f"points must have {params.s} coordinates")
    _check_unit(xs)
    _check_unit(ys)
    factors = [
        kernel_factor(params.alpha, xs[:, j][:, None], ys[:, j][None, :]) for j in range(params.s)
    ]
    return _combine(params.weights, factors)


@dataclass(frozen=True)
class WCEResult:
    """Worst-case error; residual is the squared value clamped away (0 if none)."""

    value: float
    squared: float
    residual: float
    n_points: int


def _kernel_mean(params: SobolevSpaceParams, pts: np.ndarray) -> float:
    n = len(pts)
    sums = []
    for start in range(0, n, _BLOCK):
        block = kernel_matrix(params, pts[start : start + _BLOCK], pts)
        sums.append(math.fsum(block.sum(axis=1)))
    return math.fsum(sums) / n**2


def worst_case_error(params: SobolevSpaceParams, pts) -> WCEResult:
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if pts.size == 0:
        raise IncompatibleError("worst-case error of an empty point set")
    check_guard(len(pts), settings.MAX_WCE_POINTS, "worst-case error point set")
    squared = _kernel_mean(params, pts) - 1.0
    residual = 0.0
    if squared < 0:
        residual = -squared
        if residual > 1e-9:
            logger.warning("negative squared worst-case error %.3g clamped to 0", squared)
        squared = 0.0
    return WCEResult(value=math.sqrt(squared), squared=squared, residual=residual, n_points=len(pts))


def _factor_integral(alpha: int, x: float) -> float:
    value, _ = integrate.quad(
        lambda y: float(kernel_factor(alpha, x, y)), 0.0, 1.0, points=[x], epsabs=1e-12, epsrel=1e-12
    )
    return value


def worst_case_error_quadrature(params: SobolevSpaceParams, pts) -> float:
    """
    Three-term formula int int K - (2/N) sum int K + (1/N^2) sum sum K with
    the integrals evaluated by adaptive quadrature. Returns the squared error.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if pts.size == 0:
        raise IncompatibleError("worst-case error of an empty point set")
    alpha = params.alpha
    double, _ = integrate.quad(lambda x: _factor_integral(alpha, x), 0.0, 1.0, epsabs=1e-12)
    constant = _combine(params.weights, [np.array([double])] * params.s)[0]
    factors = [
        np.array([_factor_integral(alpha, float(x)) for x in pts[:, j]]) for j in range(params.s)
    ]
    single = float(np.mean(_combine(params.weights, factors)))
    return float(constant - 2 * single + _kernel_mean(params, pts))


def walsh_truncated_wce_squared(params: SobolevSpaceParams, net: DigitalNet, resolution: int) -> float:
    """
    sum over k, l in the dual net without 0, with k, l < b^K, of the Walsh
    coefficients K^(k, l), each approximated on the b^-K grid. One-dimensional
    nets only.
    """
    if net.s != 1 or params.s != 1:
        raise IncompatibleError("Walsh-side worst-case error is implemented for s = 1")
    b = net.b
    cells = b**resolution
    check_guard(cells * cells, settings.MAX_ENUMERATION, "Walsh kernel grid")
    grid = np.arange(cells, dtype=np.float64)[:, None] / cells
    gram = kernel_matrix(params, grid, grid)
    dual = [k for k in range(1, cells) if dual_contains(net, (k,))]
    if not dual:
        return 0.0
    roots = root_table(b)
    walsh = np.stack([roots[grid_exponents((k,), b, resolution)] for k in dual])
    coefficients = walsh.conj() @ gram @ walsh.T / cells**2
    return float(coefficients.sum().real)


@dataclass(frozen=True)
class WCEComparison:
    n_plain: int
    wce_plain: float
    n_antithetic: int
    wce_antithetic: float
    residual: float


def wce_compare(params: SobolevSpaceParams, net: DigitalNet) -> WCEComparison:
    """Worst-case errors of pi(net) and pi(antithetic(net)) side by side."""
    if net.s != params.s:
        raise IncompatibleError(f"net has dimension {net.s}, weights cover {params.s}")
    check_guard(net.size * net.b, settings.MAX_WCE_POINTS, "worst-case error point set")
    plain = worst_case_error(params, to_array(net))
    anti = worst_case_error(params, to_array(antithetic(net)))
    logger.info(
        "wce N=%d: %.6g, antithetic N=%d: %.6g",
        plain.n_points, plain.value, anti.n_points, anti.value,
    )
    return WCEComparison(
        n_plain=plain.n_points,
        wce_plain=plain.value,
        n_antithetic=anti.n_points,
        wce_antithetic=anti.value,
        residual=max(plain.residual, anti.residual),
    )
