"""
QMC integration, the test integrands with their exact integrals, the
signed-error identity for antithetic nets, and the convergence harness.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, TextIO, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import IncompatibleError, IndexBoundError, ParameterError
from app.qmc.digits import DigitVector, delta, expand, pi
from app.qmc.hopl import HoplSpec, hopl_net
from app.qmc.net import DigitalNet, antithetic, dual_enumerate, points, to_array
from app.qmc.polynomial import PolyZb
from app.qmc.sobol import DirectionNumberRecord, default_directions, sobol_net
from app.qmc.walsh import chi_vector, root_table

logger = logging.getLogger(__name__)

FUNCTION_KINDS = ("f1", "f2", "f3", "walsh_poly", "custom")

WalshTerm = tuple[tuple[int, ...], complex]
PointSet = Union[np.ndarray, Sequence[Sequence[DigitVector]]]


def _f2_bracket(x: np.ndarray) -> np.ndarray:
    return -10 + 42 * x**2 - 42 * x**5 + 21 * x**6


def _f3_bracket(x: np.ndarray) -> np.ndarray:
    return (
        31 - 84 * x**2 + 8 * x**3 + 70 * x**4 - 28 * x**6 + 8 * x**7
        - 16 * math.cos(1.0) - 16 * np.sin(x)
    )


@dataclass(frozen=True)
class TestFunction:
    """
    An integrand on [0,1]^s.

    f1: exp(theta sum_j x_j / j^zeta)
    f2: prod_j (1 + w^j / 21 (-10 + 42 x^2 - 42 x^5 + 21 x^6))
    f3: prod_j (1 + w^j / 8 (31 - 84 x^2 + 8 x^3 + 70 x^4 - 28 x^6 + 8 x^7 - 16 cos 1 - 16 sin x))
    walsh_poly: finite sum of c_k wal_k
    """

    __test__ = False

    kind: str
    s: int
    theta: float = 0.1
    zeta: float = 1.0
    w: float = 0.5
    b: int = 2
    terms: tuple[WalshTerm, ...] = ()
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    exact: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FUNCTION_KINDS:
            raise ParameterError(f"unknown test function {self.kind!r}")
        if self.s < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.s}")
        if self.kind == "f1" and (self.theta <= 0 or self.zeta <= 0):
            raise ParameterError("f1 needs theta > 0 and zeta > 0")
        if self.kind in ("f2", "f3") and self.w <= 0:
            raise ParameterError(f"{self.kind} needs w > 0")
        if self.kind == "walsh_poly":
            terms = tuple((tuple(int(v) for v in k), complex(c)) for k, c in self.terms)
            if any(len(k) != self.s for k, _ in terms):
                raise IncompatibleError(f"Walsh indices must have {self.s} components")
            object.__setattr__(self, "terms", terms)
        if self.kind == "custom" and self.func is None:
            raise ParameterError("custom test functions need a callable")

    @classmethod
    def f1(cls, s: int, theta: float = 0.1, zeta: float = 1.0) -> "TestFunction":
        return cls(kind="f1", s=s, theta=theta, zeta=zeta)

    @classmethod
    def f2(cls, s: int, w: float) -> "TestFunction":
        return cls(kind="f2", s=s, w=w)

    @classmethod
    def f3(cls, s: int, w: float) -> "TestFunction":
        return cls(kind="f3", s=s, w=w)

    @classmethod
    def walsh_poly(cls, b: int, terms: Sequence[WalshTerm]) -> "TestFunction":
        if not terms:
            raise ParameterError("a Walsh polynomial needs at least one term")
        return cls(kind="walsh_poly", s=len(terms[0][0]), b=b, terms=tuple(terms))

    @classmethod
    def custom(cls, s: int, func: Callable[[np.ndarray], np.ndarray], exact: Optional[float] = None) -> "TestFunction":
        return cls(kind="custom", s=s, func=func, exact=exact)

    @property
    def is_complex(self) -> bool:
        return self.kind == "walsh_poly"

    def coefficient(self, k: Sequence[int]) -> complex:
        k = tuple(k)
        return sum((c for kk, c in self.terms if kk == k), 0j)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at the rows of an (N, s) array."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.s:
            raise IncompatibleError(f"points have {x.shape[1]} coordinates, function needs {self.s}")
        if self.kind == "f1":
            scale = self.theta / np.arange(1, self.s + 1, dtype=np.float64) ** self.zeta
            return np.exp(x @ scale)
        if self.kind in ("f2", "f3"):
            bracket, denom = (_f2_bracket, 21.0) if self.kind == "f2" else (_f3_bracket, 8.0)
            w = self.w ** np.arange(1, self.s + 1, dtype=np.float64) / denom
            return np.prod(1.0 + w * bracket(x), axis=1)
        if self.kind == "custom":
            return np.asarray(self.func(x))
        return self._walsh_values(x)

    def _walsh_values(self, x: np.ndarray) -> np.ndarray:
        # wal_k(x) only depends on the first len(k) digits of x
        b = self.b
        roots = root_table(b)
        depth = max((len(expand(v, b).digits) for k, _ in self.terms for v in k), default=0)
        scaled = x * b**depth
        nearest = np.rint(scaled)
        scaled = np.where(np.abs(scaled - nearest) < 1e-9, nearest, np.floor(scaled))
        cells = np.minimum(scaled, b**depth - 1).astype(np.int64)
        digits = np.empty(x.shape + (depth,), dtype=np.int64)
        for i in range(depth - 1, -1, -1):
            digits[..., i] = cells % b
            cells = cells // b
        out = np.zeros(len(x), dtype=np.complex128)
        for k, c in self.terms:
            exponent = np.zeros(len(x), dtype=np.int64)
            for j, kj in enumerate(k):
                for i, kappa in enumerate(expand(kj, b).digits):
                    exponent += kappa * digits[:, j, i]
            out += c * roots[exponent % b]
        return out

    def evaluate_group(self, pts: Sequence[Sequence[DigitVector]]) -> np.ndarray:
        """Walsh polynomials evaluated through the characters of G^s."""
        if self.kind != "walsh_poly":
            values = np.array([[pi(zj) for zj in z] for z in pts])
            return self.evaluate(values)
        roots = root_table(self.b)
        return np.array(
            [sum(c * roots[chi_vector(k, z).exponent] for k, c in self.terms) for z in pts],
            dtype=np.complex128,
        )


def _mean(values: np.ndarray) -> Union[float, complex]:
    n = len(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist())) / n
    return math.fsum(values.tolist()) / n


def integrate(f: TestFunction, pts: PointSet) -> Union[float, complex]:
    """(1/N) sum_n f(x_n) over a multiset given as an array or as group points."""
    if len(pts) == 0:
        raise IncompatibleError("cannot integrate over an empty point set")
    if isinstance(pts, np.ndarray):
        return _mean(f.evaluate(pts))
    return _mean(f.evaluate_group(pts))


def exact_integral(f: TestFunction) -> Union[float, complex]:
    if f.kind == "f1":
        j = np.arange(1, f.s + 1, dtype=np.float64) ** f.zeta
        return float(np.prod(j / f.theta * np.expm1(f.theta / j)))
    if f.kind in ("f2", "f3"):
        return 1.0
    if f.kind == "walsh_poly":
        return f.coefficient((0,) * f.s)
    if f.exact is None:
        raise ParameterError("custom function has no registered exact integral")
    return f.exact


def _resolution_for(f: TestFunction) -> int:
    return max((len(expand(v, f.b).digits) for k, _ in f.terms for v in k), default=0)


def _dual_terms(f: TestFunction, net: DigitalNet, resolution: Optional[int]) -> list[WalshTerm]:
    if f.kind != "walsh_poly":
        raise ParameterError("Walsh-side identities need a Walsh polynomial")
    if f.b != net.b or f.s != net.s:
        raise IncompatibleError("Walsh polynomial and net disagree on base or dimension")
    needed = _resolution_for(f)
    resolution = needed if resolution is None else resolution
    if needed > resolution:
        raise IndexBoundError(f"Walsh indices need {needed} digits, resolution is {resolution}")
    dual = set(dual_enumerate(net, resolution))
    zero = (0,) * f.s
    return [(k, c) for k, c in f.terms if k != zero and k in dual]


def signed_error_check(
    f: TestFunction, net: DigitalNet, resolution: Optional[int] = None
) -> tuple[complex, complex]:
    """
    lhs = I(f; antithetic net) - f^(0) computed on the group, and
    rhs = sum of f^(k) over nonzero dual k with delta(k) = 0.
    """
    terms = _dual_terms(f, net, resolution)
    lhs = complex(integrate(f, points(antithetic(net)))) - complex(exact_integral(f))
    rhs = complex(sum((c for k, c in terms if delta(k, net.b) == 0), 0j))
    return lhs, rhs


def dual_coefficient_sums(
    f: TestFunction, net: DigitalNet, resolution: Optional[int] = None
) -> tuple[float, float]:
    """(sum |f^(k)| over the antithetic dual, sum |f^(k)| over the dual), k != 0."""
    terms = _dual_terms(f, net, resolution)
    full = math.fsum(abs(c) for _, c in terms)
    restricted = math.fsum(abs(c) for k, c in terms if delta(k, net.b) == 0)
    return restricted, full


NetFactory = Callable[[int], DigitalNet]


def sobol_factory(
    s: int, records: Optional[Sequence[DirectionNumberRecord]] = None
) -> NetFactory:
    records = records if records is not None else default_directions(s)
    return lambda m: sobol_net(s, m, records)


def hopl_factory(p: PolyZb, q: Sequence[PolyZb], n: Optional[int] = None) -> NetFactory:
    """Nets with a fixed modulus and generating vector; m must not exceed deg(p)."""
    n = n if n is not None else p.degree
    return lambda m: hopl_net(HoplSpec(b=p.b, m=m, n=n, p=p, q=tuple(q)))


VARIANTS = ("plain", "antithetic")


@dataclass(frozen=True)
class ConvergenceRow:
    variant: str
    m: int
    n_points: int
    abs_error: float


@dataclass(frozen=True)
class SlopeFit:
    slope: Optional[float]
    window: tuple[int, ...]
    zero_errors: tuple[int, ...]
    per_step: tuple[Optional[float], ...]

    @property
    def flagged(self) -> bool:
        return self.slope is None or bool(self.zero_errors)


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]
    fits: dict[str, SlopeFit]

    def write_csv(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="") as handle:
                self.write_csv(handle)
            return
        writer = csv.writer(out)
        writer.writerow(["variant", "m", "N", "abs_error"])
        for row in self.rows:
            writer.writerow([row.variant, row.m, row.n_points, repr(row.abs_error)])


def fit_slope(rows: Sequence[ConvergenceRow], window: Optional[int] = None) -> SlopeFit:
    """
    Least-squares slope of log(error) against log(N) over the largest
    min(window, ceil(len/2)) m-values with nonzero error (at least 2).
    """
    window = window or settings.SLOPE_WINDOW
    rows = sorted(rows, key=lambda r: r.m)
    zero = tuple(r.m for r in rows if r.abs_error == 0)
    per_step = []
    for a, b in zip(rows, rows[1:]):
        if a.abs_error > 0 and b.abs_error > 0:
            per_step.append(
                math.log(b.abs_error / a.abs_error) / math.log(b.n_points / a.n_points)
            )
        else:
            per_step.append(None)
    usable = [r for r in rows if r.abs_error > 0]
    size = max(min(window, math.ceil(len(rows) / 2)), 2)
    chosen = usable[-size:]
    if len(chosen) < 2:
        return SlopeFit(slope=None, window=tuple(r.m for r in chosen), zero_errors=zero, per_step=tuple(per_step))
    log_n = np.log([r.n_points for r in chosen])
    log_e = np.log([r.abs_error for r in chosen])
    slope = float(np.polyfit(log_n, log_e, 1)[0])
    return SlopeFit(slope=slope, window=tuple(r.m for r in chosen), zero_errors=zero, per_step=tuple(per_step))


def convergence_study(
    f: TestFunction,
    factory: NetFactory,
    m_values: Sequence[int],
    variant: str = "both",
) -> ConvergenceReport:
    """Absolute errors |I(f; P) - I(f)| for each m; antithetic sets have b^(m+1) points."""
    if not m_values:
        raise ParameterError("the m-range is empty")
    if variant not in VARIANTS + ("both",):
        raise ParameterError(f"unknown variant {variant!r}")
    variants = VARIANTS if variant == "both" else (variant,)
    exact = exact_integral(f)
    rows = []
    for name in variants:
        for m in m_values:
            net = factory(m)
            if net.s != f.s:
                raise IncompatibleError(f"generator dimension {net.s} does not match function dimension {f.s}")
            if name == "antithetic":
                net = antithetic(net)
            value = integrate(f, to_array(net))
            error = abs(value - exact)
            rows.append(ConvergenceRow(variant=name, m=m, n_points=net.size, abs_error=float(error)))
            logger.debug("%s m=%d N=%d error=%.3e", name, m, net.size, error)
    fits = {name: fit_slope([r for r in rows if r.variant == name]) for name in variants}
    for name, fit in fits.items():
        logger.info("%s slope %s over m=%s", name, fit.slope, fit.window)
    return ConvergenceReport(rows=rows, fits=fits)
