"""
Weights gamma_u of the weighted Sobolev space, either in product form
gamma_u = prod_{j in u} gamma_j or as an explicit map over subsets.
Coordinates are 0-based internally and 1-based in the text format.
The empty set always carries weight 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from app.core.exceptions import ParameterError

MAX_MAP_DIMENSION = 12

Subset = tuple[int, ...]


@dataclass(frozen=True)
class Weights:
    s: int
    product: Optional[tuple[float, ...]] = None
    subset_weights: tuple[tuple[Subset, float], ...] = ()

    def __post_init__(self):
        if self.s < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.s}")
        if self.product is not None:
            if len(self.product) != self.s:
                raise ParameterError(f"{len(self.product)} product weights for dimension {self.s}")
            if any(g < 0 for g in self.product):
                raise ParameterError("weights must be nonnegative")
            return
        if self.s > MAX_MAP_DIMENSION:
            raise ParameterError(
                f"explicit subset weights support s <= {MAX_MAP_DIMENSION}, got {self.s}"
            )
        for u, g in self.subset_weights:
            if g < 0:
                raise ParameterError("weights must be nonnegative")
            if not u or any(j < 0 or j >= self.s for j in u):
                raise ParameterError(f"subset {u} is not a nonempty subset of 0..{self.s - 1}")

    @classmethod
    def uniform(cls, s: int, gamma: float = 1.0) -> "Weights":
        return cls(s=s, product=(float(gamma),) * s)

    @classmethod
    def from_product(cls, gammas: Sequence[float]) -> "Weights":
        return cls(s=len(gammas), product=tuple(float(g) for g in gammas))

    @classmethod
    def from_map(cls, s: int, mapping: dict) -> "Weights":
        items = tuple(sorted((tuple(sorted(u)), float(g)) for u, g in mapping.items()))
        return cls(s=s, subset_weights=items)

    @property
    def is_product(self) -> bool:
        return self.product is not None

    def gamma(self, u: Subset) -> float:
        u = tuple(sorted(u))
        if not u:
            return 1.0
        if self.product is not None:
            out = 1.0
            for j in u:
                out *= self.product[j]
            return out
        return dict(self.subset_weights).get(u, 0.0)

    def subsets(self) -> Iterator[tuple[Subset, float]]:
        """Nonempty subsets with positive weight."""
        if self.product is None:
            yield from ((u, g) for u, g in self.subset_weights if g > 0)
            return
        for size in range(1, self.s + 1):
            for u in combinations(range(self.s), size):
                g = self.gamma(u)
                if g > 0:
                    yield u, g

    def restrict(self, s: int) -> "Weights":
        """Weights of the first s coordinates."""
        if self.product is not None:
            return Weights(s=s, product=self.product[:s])
        return Weights(
            s=s, subset_weights=tuple((u, g) for u, g in self.subset_weights if max(u) < s)
        )

    def is_zero(self) -> bool:
        if self.product is not None:
            return not any(g > 0 for g in self.product)
        return not any(g > 0 for _, g in self.subset_weights)


def _floats(text: str, spec: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParameterError(f"cannot parse weights {spec!r}") from exc


def parse_weights(spec: str, s: int) -> Weights:
    """
    Parse `product:g`, `product:g1,...,gs`, `geometric:c` (gamma_j = c^j)
    or `map:1=0.5;1,2=0.25` (1-based coordinates).
    """
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "product":
        values = _floats(body, spec)
        if len(values) == 1:
            return Weights.uniform(s, values[0])
        if len(values) != s:
            raise ParameterError(f"weights {spec!r} do not match dimension {s}")
        return Weights.from_product(values)
    if kind == "geometric":
        values = _floats(body, spec)
        if len(values) != 1:
            raise ParameterError(f"cannot parse weights {spec!r}")
        return Weights.from_product([values[0] ** (j + 1) for j in range(s)])
    if kind == "map":
        mapping = {}
        for item in body.split(";"):
            if not item.strip():
                continue
            coords, _, value = item.partition("=")
            try:
                u = tuple(int(c) - 1 for c in coords.split(","))
            except ValueError as exc:
                raise ParameterError(f"cannot parse weights {spec!r}") from exc
            values = _floats(value, spec)
            if len(values) != 1:
                raise ParameterError(f"cannot parse weights {spec!r}")
            mapping[u] = values[0]
        return Weights.from_map(s, mapping)
    raise ParameterError(f"unknown weight form {spec!r}")
