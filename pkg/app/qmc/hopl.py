"""
Higher order polynomial lattice point sets over Z_b (b prime) with b-adic
antithetics: construction, dual-net test, the worst-case error bound
B_{alpha,gamma}(p, q) and the search for a generating vector.

The bound sums b^-mu_alpha(k_u) over the antithetic dual. Per coordinate,
k contributes a group element of Z_b^m x Z_b (the top m residue
coefficients of tr_n(k) q mod p, and delta(k)); the dual condition says the
elements of a vector k_u add up to zero, so each subset sum is a group
convolution evaluated at the identity, computed with an FFT over Z_b^(m+1).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    ParameterError,
    PolynomialError,
    check_guard,
)
from app.qmc.digits import delta_table, digit_matrix, mu_alpha_table, truncate_poly
from app.qmc.net import DigitalNet, GeneratingMatrix
from app.qmc.polynomial import PolyZb, is_irreducible, is_prime
from app.qmc.weights import Weights

logger = logging.getLogger(__name__)

_BATCH = 4096


@dataclass(frozen=True)
class LaurentExpansion:
    """First L coefficients t_1, ..., t_L of q(x)/p(x) = sum_l t_l x^-l."""

    q: PolyZb
    p: PolyZb
    coeffs: tuple[int, ...]

    def t(self, l: int) -> int:
        return self.coeffs[l - 1]


def laurent(q: PolyZb, p: PolyZb, depth: int) -> LaurentExpansion:
    """Formal long division of q by p in Z_b((x^-1))."""
    if p.is_zero():
        raise PolynomialError("Laurent expansion with the zero denominator")
    if q.degree >= p.degree:
        raise PolynomialError(f"deg(q) = {q.degree} must be below deg(p) = {p.degree}")
    b, n = p.b, p.degree
    inv = pow(p.leading, -1, b)
    rem = list(q.padded(n))
    coeffs = []
    for _ in range(depth):
        rem = [0] + rem  # multiply by x
        t = rem[n] * inv % b
        coeffs.append(t)
        if t:
            rem = [(r - t * c) % b for r, c in zip(rem, p.padded(n + 1))]
        rem = rem[:n]
    return LaurentExpansion(q=q, p=p, coeffs=tuple(coeffs))


@dataclass(frozen=True)
class HoplSpec:
    """Modulus p of degree n and generating vector q with deg(q_j) < n."""

    b: int
    m: int
    n: int
    p: PolyZb
    q: tuple[PolyZb, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(self.q))
        if not is_prime(self.b):
            raise PolynomialError(f"polynomial lattices need a prime base, got {self.b}")
        if not 1 <= self.m <= self.n:
            raise ParameterError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.p.b != self.b or self.p.degree != self.n:
            raise ParameterError(f"modulus {self.p} must have degree {self.n} over Z_{self.b}")
        if not self.q:
            raise ParameterError("generating vector must be nonempty")
        for qj in self.q:
            if qj.b != self.b or qj.degree >= self.n:
                raise ParameterError(f"generating polynomial {qj} must have degree < {self.n}")

    @property
    def s(self) -> int:
        return len(self.q)


def hopl_matrices(spec: HoplSpec) -> list[GeneratingMatrix]:
    """C_j with entry (l, r) = t_{l+r-1} for l <= n and zero rows below."""
    matrices = []
    for qj in spec.q:
        t = laurent(qj, spec.p, spec.n + spec.m - 1)
        rows = tuple(tuple(t.t(l + r - 1) for r in range(1, spec.m + 1)) for l in range(1, spec.n + 1))
        matrices.append(GeneratingMatrix(b=spec.b, m=spec.m, rows=rows))
    return matrices


def hopl_net(spec: HoplSpec, depth: Optional[int] = None) -> DigitalNet:
    return DigitalNet(b=spec.b, m=spec.m, matrices=tuple(hopl_matrices(spec)), depth=depth or 0)


def hopl_dual_contains(spec: HoplSpec, k: Sequence[int]) -> bool:
    """tr_n(k_1) q_1 + ... + tr_n(k_s) q_s = a (mod p) with deg(a) < n - m."""
    if len(k) != spec.s:
        raise ParameterError(f"index of length {len(k)} for dimension {spec.s}")
    total = PolyZb.zero(spec.b)
    for kj, qj in zip(k, spec.q):
        total = total + truncate_poly(int(kj), spec.n, spec.b) * qj
    return (total % spec.p).degree < spec.n - spec.m


@dataclass(frozen=True)
class ErrorBoundParams:
    """alpha >= 2, 1/alpha < lambda <= 1, weights, truncation K (None: n + offset)."""

    alpha: int
    lam: float
    weights: Weights
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.alpha < 2:
            raise ParameterError(f"alpha must be >= 2, got {self.alpha}")
        if not 1.0 / self.alpha < self.lam <= 1.0:
            raise ParameterError(f"lambda must lie in (1/alpha, 1], got {self.lam}")
        if self.truncation is not None and self.truncation < 1:
            raise ParameterError(f"truncation must be >= 1, got {self.truncation}")

    def resolve_truncation(self, n: int) -> int:
        return self.truncation if self.truncation is not None else n + settings.TRUNCATION_OFFSET


def constant_A(alpha: int, lam: float, b: int) -> float:
    """A_{alpha,lambda} = sum_{k >= 1} b^(-lambda mu_alpha(k))."""
    if alpha < 2:
        raise ParameterError(f"alpha must be >= 2, got {alpha}")
    if not 1.0 / alpha < lam <= 1.0:
        raise ParameterError(f"the series diverges unless 1/alpha < lambda <= 1, got {lam}")
    ratios = [(b - 1) / (b ** (lam * i) - 1) for i in range(1, alpha + 1)]
    total = 0.0
    running = 1.0
    for v in range(1, alpha):
        running *= ratios[v - 1]
        total += running
    running *= ratios[alpha - 1]
    total += (b ** (lam * alpha) - 1) / (b ** (lam * alpha) - b) * running
    return total


def constants_C_D(alpha: int, b: int) -> tuple[tuple[float, ...], float]:
    """(C_1, ..., C_{2 alpha}) and D_alpha from the Walsh-coefficient bounds of the kernel."""
    if alpha < 2:
        raise ParameterError(f"alpha must be >= 2, got {alpha}")
    base = 2 * math.sin(math.pi / b)
    growth = 1 + 1 / b + 1 / (b * (b + 1))
    c = [1 / base] + [growth ** (tau - 2) / base**tau for tau in range(2, 2 * alpha + 1)]
    d = max(
        sum(c[tau - 1] ** 2 / b ** (2 * (tau - v)) for tau in range(v, alpha + 1))
        + 2 * c[2 * alpha - 1] / b ** (2 * (alpha - v))
        for v in range(1, alpha + 1)
    )
    return tuple(c), d


def constant_C_alpha_lambda(alpha: int, lam: float, b: int) -> float:
    """2 D_alpha^(lambda/2) A_{alpha,lambda}."""
    _, d = constants_C_D(alpha, b)
    return 2 * d ** (lam / 2) * constant_A(alpha, lam, b)


def mu_partial_sum(alpha: int, lam: float, b: int, resolution: int) -> float:
    """sum_{k=1}^{b^K - 1} b^(-lambda mu_alpha(k))."""
    check_guard(b**resolution, settings.MAX_ENUMERATION, "mu_alpha partial sum")
    mu = mu_alpha_table(b**resolution, alpha, b)[1:]
    return float(math.fsum(np.power(float(b), -lam * mu)))


def theorem_bound(params: ErrorBoundParams, s: int, m: int, n: int, b: int) -> float:
    """
    (1/b^min(m, 2 lambda n)) sum_u 2 gamma_u^(lambda/2) D^(lambda|u|/2) A^|u|,
    the bound on the average of B^lambda over all generating vectors.
    """
    lam = params.lam
    a = constant_A(params.alpha, lam, b)
    _, d = constants_C_D(params.alpha, b)
    weights = params.weights.restrict(s) if params.weights.s != s else params.weights
    if weights.is_product:
        total = 2 * (math.prod(1 + g ** (lam / 2) * d ** (lam / 2) * a for g in weights.product) - 1)
    else:
        total = sum(2 * g ** (lam / 2) * d ** (lam * len(u) / 2) * a ** len(u) for u, g in weights.subsets())
    return total / b ** min(m, 2 * lam * n)


def worst_case_bound(params: ErrorBoundParams, s: int, m: int, n: int, b: int) -> float:
    """The existence bound on the worst-case error of the best antithetic lattice."""
    return theorem_bound(params, s, m, n, b) ** (1 / params.lam)


@dataclass(frozen=True)
class BoundReport:
    truncated: float
    tail: float
    truncation: int

    @property
    def total(self) -> float:
        return self.truncated + self.tail


class BoundEvaluator:
    """
    Evaluates B_{alpha,gamma}(p, q) for many generating vectors sharing p,
    m and the truncation K. Per-polynomial transforms are cached.
    """

    def __init__(
        self,
        p: PolyZb,
        m: int,
        s: int,
        params: ErrorBoundParams,
        antithetic: bool = True,
    ):
        self.p = p
        self.b = p.b
        self.n = p.degree
        self.m = m
        self.s = s
        self.params = params
        self.antithetic = antithetic
        self.truncation = params.resolve_truncation(self.n)
        if not 1 <= m <= self.n:
            raise ParameterError(f"need 1 <= m <= n, got m={m}, n={self.n}")
        weights = params.weights
        if weights.s < s:
            raise ParameterError(f"weights cover {weights.s} coordinates, need {s}")
        self.weights = weights.restrict(s) if weights.s > s else weights
        check_guard(self.b**self.truncation, settings.MAX_ENUMERATION, "bound truncation")
        _, self.d = constants_C_D(params.alpha, self.b)
        self.a1 = constant_A(params.alpha, 1.0, self.b)
        n_values = self.b**self.truncation
        self._kdigits = digit_matrix(n_values, self.n, self.b)[1:]
        self._terms = np.power(float(self.b), -mu_alpha_table(n_values, params.alpha, self.b)[1:])
        self._delta = delta_table(n_values, self.b)[1:]
        self._shape = (self.b,) * (m + (1 if antithetic else 0))
        self._cache: dict[int, np.ndarray] = {}

    @property
    def group_size(self) -> int:
        return self.b ** len(self._shape)

    def _residue_basis(self, q: PolyZb) -> np.ndarray:
        """Top m coefficients of (x^i q mod p) for i < n, as an (n, m) array."""
        basis = np.zeros((self.n, self.m), dtype=np.int64)
        for i in range(self.n):
            r = (PolyZb.monomial(self.b, i) * q) % self.p
            basis[i] = r.padded(self.n)[self.n - self.m :]
        return basis

    def transform(self, q: PolyZb) -> np.ndarray:
        """FFT over the group of the weighted histogram of k -> (code(k), delta(k))."""
        key = q.to_int()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        codes = (self._kdigits @ self._residue_basis(q)) % self.b
        index = [codes[:, r] for r in range(self.m)]
        if self.antithetic:
            index.append(self._delta)
        table = np.zeros(self._shape, dtype=np.float64)
        np.add.at(table, tuple(index), self._terms)
        out = np.fft.fftn(table).reshape(-1)
        self._cache[key] = out
        return out

    def tail(self) -> float:
        """
        Bound on the part of B with some k_j >= b^K:
        sum_u gamma_u^(1/2) D^(|u|/2) |u| A^(|u|-1) (A - S_K).
        """
        rest = max(self.a1 - float(math.fsum(self._terms)), 0.0)
        root_d = math.sqrt(self.d)
        if self.weights.is_product:
            c = [math.sqrt(g) * root_d for g in self.weights.product]
            total = 0.0
            for j, cj in enumerate(c):
                total += cj * math.prod(1 + ci * self.a1 for i, ci in enumerate(c) if i != j)
            return total * rest
        return rest * sum(
            math.sqrt(g) * root_d ** len(u) * len(u) * self.a1 ** (len(u) - 1)
            for u, g in self.weights.subsets()
        )

    def truncated_many(self, transforms: np.ndarray) -> np.ndarray:
        """
        Truncated bound for a batch of generating vectors given their
        transforms, shape (batch, s, |group|).
        """
        root_d = math.sqrt(self.d)
        if self.weights.is_product:
            c = np.array([math.sqrt(g) * root_d for g in self.weights.product])
            prod = np.prod(1 + c[None, :, None] * transforms, axis=1)
            values = prod.mean(axis=1).real - 1.0
        else:
            values = np.zeros(transforms.shape[0])
            for u, g in self.weights.subsets():
                prod = np.prod(transforms[:, list(u), :], axis=1)
                values += math.sqrt(g) * root_d ** len(u) * prod.mean(axis=1).real
        return np.maximum(values, 0.0)

    def evaluate(self, q: Sequence[PolyZb]) -> BoundReport:
        if len(q) != self.s:
            raise ParameterError(f"generating vector of length {len(q)} for dimension {self.s}")
        transforms = np.stack([self.transform(qj) for qj in q])[None, :, :]
        return BoundReport(
            truncated=float(self.truncated_many(transforms)[0]),
            tail=self.tail(),
            truncation=self.truncation,
        )


def bound_B(
    spec: HoplSpec, params: ErrorBoundParams, antithetic: bool = True
) -> BoundReport:
    """
    Truncated B_{alpha,gamma}(p, q) over k_j < b^K plus a tail bound, so
    that truncated + tail is a certified upper bound. With antithetic=False
    the delta(k) = 0 restriction is dropped.
    """
    evaluator = BoundEvaluator(spec.p, spec.m, spec.s, params, antithetic=antithetic)
    return evaluator.evaluate(spec.q)


@dataclass(frozen=True)
class SearchResult:
    p: PolyZb
    q: tuple[PolyZb, ...]
    truncated: float
    tail: float
    truncation: int
    strategy: str
    candidates: int
    mean_bound_pow: float
    values: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    @property
    def total(self) -> float:
        return self.truncated + self.tail


def _coefficient_key(indices: Sequence[int], b: int, n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(PolyZb.from_int(int(i), b).padded(n) for i in indices)


def search_q(
    p: PolyZb,
    s: int,
    m: int,
    params: ErrorBoundParams,
    strategy: str = "exhaustive",
    trials: int = 1000,
    seed: int = 0,
    keep_values: bool = False,
) -> SearchResult:
    """
    Generating vector minimizing the truncated bound over all of R_{b,n}^s
    (exhaustive) or over `trials` uniformly drawn vectors (random). Ties go
    to the lexicographically smallest coefficient tuple.
    """
    b, n = p.b, p.degree
    if not is_prime(b):
        raise PolynomialError(f"polynomial lattices need a prime base, got {b}")
    if not is_irreducible(p):
        logger.warning("modulus %s is reducible; the existence bound assumes irreducibility", p)
    evaluator = BoundEvaluator(p, m, s, params)
    per_coordinate = b**n
    if strategy == "exhaustive":
        total = per_coordinate**s
        check_guard(total, settings.MAX_EXHAUSTIVE_CANDIDATES, "exhaustive search space")
        candidates = np.stack(
            np.unravel_index(np.arange(total), (per_coordinate,) * s), axis=1
        ).astype(np.int64)
    elif strategy == "random":
        if trials < 1:
            raise ParameterError(f"random search needs trials >= 1, got {trials}")
        rng = np.random.default_rng(seed)
        candidates = rng.integers(0, per_coordinate, size=(trials, s), dtype=np.int64)
    else:
        raise ParameterError(f"unknown search strategy {strategy!r}")

    group = evaluator.group_size
    check_guard(s * group, settings.MAX_ENUMERATION, "per-candidate transform array")
    distinct, inverse = np.unique(candidates.ravel(), return_inverse=True)
    check_guard(len(distinct) * group, settings.MAX_ENUMERATION, "transform table")
    slots = inverse.reshape(candidates.shape)
    table = np.stack([evaluator.transform(PolyZb.from_int(int(i), b)) for i in distinct])
    batch_size = max(min(_BATCH, settings.MAX_ENUMERATION // (s * group)), 1)
    batches = [slots[i : i + batch_size] for i in range(0, len(slots), batch_size)]

    def run(batch: np.ndarray) -> np.ndarray:
        return evaluator.truncated_many(table[batch])

    workers = max(settings.SEARCH_WORKERS, 1)
    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.concatenate(list(pool.map(run, batches)))
    else:
        values = np.concatenate([run(batch) for batch in batches])

    best = float(values.min())
    near = np.nonzero(values <= best * (1 + 1e-12) + 1e-300)[0]
    winner = min(near, key=lambda i: _coefficient_key(candidates[i], b, n))
    tail = evaluator.tail()
    mean_pow = float(np.mean((values + tail) ** params.lam))
    q_star = tuple(PolyZb.from_int(int(i), b) for i in candidates[winner])
    logger.info(
        "search %s over %d candidates: best truncated bound %.6g (tail %.3g)",
        strategy, len(candidates), float(values[winner]), tail,
    )
    return SearchResult(
        p=p,
        q=q_star,
        truncated=float(values[winner]),
        tail=tail,
        truncation=evaluator.truncation,
        strategy=strategy,
        candidates=len(candidates),
        mean_bound_pow=mean_pow,
        values=values if keep_values else None,
    )


__all__ = [
    "BoundEvaluator",
    "BoundReport",
    "ErrorBoundParams",
    "HoplSpec",
    "LaurentExpansion",
    "SearchResult",
    "bound_B",
    "constant_A",
    "constant_C_alpha_lambda",
    "constants_C_D",
    "hopl_dual_contains",
    "hopl_matrices",
    "hopl_net",
    "laurent",
    "mu_partial_sum",
    "search_q",
    "theorem_bound",
    "worst_case_bound",
]
