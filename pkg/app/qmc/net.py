"""
Digital nets over Z_b with generating matrices of unbounded height.

A GeneratingMatrix stores R explicit rows and an optional continuation row
repeated for every deeper row, so the all-ones column added by b-adic
antithetic sampling stays exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from app.core.config import resolve_depth, settings
from app.core.exceptions import (
    DigitRangeError,
    IncompatibleError,
    IndexBoundError,
    NetFormatError,
    check_guard,
)
from app.qmc.digits import DigitVector, const_vector, digit_matrix, expand, gadd, pi

logger = logging.getLogger(__name__)

Point = tuple[DigitVector, ...]


@dataclass(frozen=True)
class GeneratingMatrix:
    """Z_b matrix with m columns: explicit rows plus an optional continuation row."""

    b: int
    m: int
    rows: tuple[tuple[int, ...], ...]
    continuation: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.continuation is not None:
            object.__setattr__(self, "continuation", tuple(int(v) for v in self.continuation))
        for row in rows + ((self.continuation,) if self.continuation is not None else ()):
            if len(row) != self.m:
                raise IncompatibleError(f"row {row} does not have {self.m} entries")
            if any(v < 0 or v >= self.b for v in row):
                raise DigitRangeError(f"matrix entries must lie in 0..{self.b - 1}: {row}")

    @property
    def R(self) -> int:
        return len(self.rows)

    @property
    def tail_row(self) -> tuple[int, ...]:
        return self.continuation if self.continuation is not None else (0,) * self.m

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i] if i < self.R else self.tail_row

    def to_array(self, depth: int) -> np.ndarray:
        """The first `depth` rows, continuation materialized, as a (depth, m) array."""
        out = np.zeros((depth, self.m), dtype=np.int64)
        for i in range(depth):
            out[i] = self.row(i)
        return out

    def with_ones_column(self) -> "GeneratingMatrix":
        """(C | (1, 1, ...)^T)."""
        return GeneratingMatrix(
            b=self.b,
            m=self.m + 1,
            rows=tuple(row + (1,) for row in self.rows),
            continuation=self.tail_row + (1,),
        )


@dataclass(frozen=True)
class DigitalNet:
    """b^m points of G^s generated by s matrices with equal base and column count."""

    b: int
    m: int
    matrices: tuple[GeneratingMatrix, ...]
    depth: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if not self.matrices:
            raise IncompatibleError("a digital net needs at least one generating matrix")
        object.__setattr__(self, "depth", resolve_depth(self.b, self.depth or None))
        for c in self.matrices:
            if c.b != self.b or c.m != self.m:
                raise IncompatibleError(
                    f"matrix over Z_{c.b} with {c.m} columns in a net over Z_{self.b} with m={self.m}"
                )
            if c.R > self.depth:
                raise IncompatibleError(f"matrix has {c.R} explicit rows, depth is {self.depth}")

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def size(self) -> int:
        return self.b**self.m

    def __len__(self) -> int:
        return self.size


def _index_digits(h: int, b: int, m: int) -> tuple[int, ...]:
    digits = expand(h, b).digits
    return digits + (0,) * (m - len(digits))


def point(net: DigitalNet, h: int) -> Point:
    """z_h: coordinate j has digits C_j . (eta_0, ..., eta_{m-1})^T mod b."""
    if not 0 <= h < net.size:
        raise IndexBoundError(f"point index {h} outside 0..{net.size - 1}")
    eta = _index_digits(h, net.b, net.m)
    b = net.b
    coords = []
    for c in net.matrices:
        explicit = [sum(r * e for r, e in zip(row, eta)) % b for row in c.rows]
        deep = sum(r * e for r, e in zip(c.tail_row, eta)) % b
        digits = explicit + [deep] * (net.depth - c.R)
        coords.append(DigitVector(b, tuple(digits), deep))
    return tuple(coords)


def points(net: DigitalNet) -> list[Point]:
    """All points in index order h = 0, 1, ..., b^m - 1 (with multiplicity)."""
    return [point(net, h) for h in range(net.size)]


def to_array(net: DigitalNet) -> np.ndarray:
    """
    pi-values of all points as an (N, s) float64 array.

    For b = 2 the digits are packed into 64-bit integers and combined with
    XOR. Every entry is the correctly rounded value of pi.
    """
    n_points, w = net.size, net.depth
    out = np.empty((n_points, net.s), dtype=np.float64)
    if net.b**w >= 2**62:
        for h in range(n_points):
            out[h] = [pi(z) for z in point(net, h)]
        return out
    h = np.arange(n_points, dtype=np.int64)
    if net.b == 2:
        for j, c in enumerate(net.matrices):
            cols = c.to_array(w)
            weights = [1 << (w - 1 - i) for i in range(w)]
            packed = [int(sum(int(cols[i, r]) * weights[i] for i in range(w))) for r in range(c.m)]
            value = np.zeros(n_points, dtype=np.uint64)
            tail = np.zeros(n_points, dtype=np.uint64)
            for r in range(c.m):
                bit = ((h >> r) & 1).astype(np.uint64)
                value ^= bit * np.uint64(packed[r])
                tail ^= bit * np.uint64(c.tail_row[r])
            out[:, j] = (value + tail).astype(np.float64) / float(2**w)
        return out
    b = net.b
    scale = b**w
    eta = digit_matrix(n_points, net.m, b)
    weights = np.array([b ** (w - 1 - i) for i in range(w)], dtype=np.int64)
    for j, c in enumerate(net.matrices):
        digits = (eta @ c.to_array(w).T) % b
        numerator = digits @ weights
        tail = (eta @ np.array(c.tail_row, dtype=np.int64)) % b
        if (b - 1) * scale < 2**53:
            out[:, j] = (numerator * (b - 1) + tail) / float((b - 1) * scale)
            continue
        # below 2**53 numerator and scale are exact doubles: one rounding for zero tails
        out[:, j] = numerator / float(scale)
        inexact = np.nonzero(tail)[0] if scale < 2**53 else range(n_points)
        for h in inexact:
            out[h, j] = float(Fraction(int(numerator[h]) * (b - 1) + int(tail[h]), (b - 1) * scale))
    return out


def antithetic(net: DigitalNet) -> DigitalNet:
    """b-adic antithetic net: every matrix gains an all-ones column."""
    return DigitalNet(
        b=net.b,
        m=net.m + 1,
        matrices=tuple(c.with_ones_column() for c in net.matrices),
        depth=net.depth,
    )


def antithetic_points(net_points: Sequence[Point]) -> list[Point]:
    """Union over l in Z_b of {z + e_l}, the same l on every coordinate."""
    if not net_points:
        return []
    b, w = net_points[0][0].base, net_points[0][0].depth
    out = []
    for l in range(b):
        e = const_vector(l, b, w)
        out.extend(tuple(gadd(zj, e) for zj in z) for z in net_points)
    return out


def symmetrize(net_points: Sequence[Point]) -> list[Point]:
    """Union over l in Z_b^s of {z + (e_l1, ..., e_ls)}; b^s times the input size."""
    if not net_points:
        return []
    b, w = net_points[0][0].base, net_points[0][0].depth
    s = len(net_points[0])
    constants = [const_vector(l, b, w) for l in range(b)]
    out = []
    for shift in product(range(b), repeat=s):
        out.extend(
            tuple(gadd(zj, constants[lj]) for zj, lj in zip(z, shift)) for z in net_points
        )
    return out


def multiset_key(pts: Sequence[Point]) -> list[tuple[tuple[int, ...], ...]]:
    """Sorted digit/tail tuples; equal keys mean equal multisets."""
    return sorted(tuple(zj.key() for zj in z) for z in pts)


def _check_index(net: DigitalNet, k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if len(k) != net.s:
        raise IncompatibleError(f"index of length {len(k)} for a net of dimension {net.s}")
    bound = net.b**net.depth
    if any(kj < 0 or kj >= bound for kj in k):
        raise IndexBoundError(f"index {k} outside 0..b^W - 1 = {bound - 1}")
    return k


def dual_contains(net: DigitalNet, k: Sequence[int]) -> bool:
    """True iff k_1 C_1 + ... + k_s C_s = 0 in Z_b^m."""
    k = _check_index(net, k)
    total = [0] * net.m
    for kj, c in zip(k, net.matrices):
        for i, kappa in enumerate(expand(kj, net.b).digits):
            if kappa == 0:
                continue
            row = c.row(i)
            for r in range(net.m):
                total[r] += kappa * row[r]
    return all(v % net.b == 0 for v in total)


def dual_images(net: DigitalNet, resolution: int) -> list[np.ndarray]:
    """Per coordinate, the vectors k C_j in Z_b^m for every k < b^K."""
    kappa = digit_matrix(net.b**resolution, resolution, net.b)
    return [(kappa @ c.to_array(resolution)) % net.b for c in net.matrices]


def dual_enumerate(net: DigitalNet, resolution: int) -> list[tuple[int, ...]]:
    """All k with every k_j < b^K in the dual net, in lexicographic order."""
    if resolution < 0:
        raise IndexBoundError(f"resolution must be >= 0, got {resolution}")
    if resolution > net.depth:
        raise IndexBoundError(f"resolution {resolution} exceeds depth {net.depth}")
    check_guard(net.b ** (net.s * resolution), settings.MAX_ENUMERATION, "dual enumeration")
    if resolution == 0:
        return [(0,) * net.s]
    dtype = np.int16 if net.b < 128 else np.int64
    images = [img.astype(dtype) for img in dual_images(net, resolution)]
    acc = images[0]
    for img in images[1:]:
        acc = ((acc[:, None, :] + img[None, :, :]) % net.b).reshape(-1, net.m)
    flat = np.nonzero(~acc.any(axis=1))[0]
    cells = net.b**resolution
    coords = np.unravel_index(flat, (cells,) * net.s)
    logger.debug("dual enumeration at K=%d found %d vectors", resolution, len(flat))
    return [tuple(int(c[i]) for c in coords) for i in range(len(flat))]


def iter_rows(text: str) -> Iterator[list[int]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise NetFormatError(f"line {lineno}: non-integer entry in {line!r}") from exc


def _normalized_rows(net: DigitalNet) -> tuple[int, bool, list[tuple[list[tuple[int, ...]], tuple]]]:
    has_cont = any(c.continuation is not None for c in net.matrices)
    r = max(c.R for c in net.matrices)
    blocks = []
    for c in net.matrices:
        rows = [c.row(i) for i in range(r)]
        blocks.append((rows, c.tail_row))
    return r, has_cont, blocks


def format_net(net: DigitalNet) -> str:
    """
    Plain-text net description: header `b s m R has_continuation`, then per
    matrix R rows of m digits and the continuation row if flagged.
    """
    r, has_cont, blocks = _normalized_rows(net)
    lines = [f"{net.b} {net.s} {net.m} {r} {int(has_cont)}"]
    for rows, tail in blocks:
        lines.extend(" ".join(str(v) for v in row) for row in rows)
        if has_cont:
            lines.append(" ".join(str(v) for v in tail))
    return "\n".join(lines) + "\n"


def parse_net(text: str, depth: Optional[int] = None) -> DigitalNet:
    rows = list(iter_rows(text))
    if not rows or len(rows[0]) != 5:
        raise NetFormatError("header must be `b s m R has_continuation`")
    b, s, m, r, flag = rows[0]
    if flag not in (0, 1) or b < 2 or s < 1 or m < 0 or r < 0:
        raise NetFormatError(f"invalid header {rows[0]}")
    per_matrix = r + flag
    body = rows[1:]
    if len(body) != s * per_matrix:
        raise NetFormatError(f"expected {s * per_matrix} matrix rows, found {len(body)}")
    matrices = []
    for j in range(s):
        block = body[j * per_matrix : (j + 1) * per_matrix]
        if any(len(row) != m for row in block):
            raise NetFormatError(f"matrix {j + 1} has a row without {m} entries")
        matrices.append(
            GeneratingMatrix(
                b=b,
                m=m,
                rows=tuple(tuple(row) for row in block[:r]),
                continuation=tuple(block[r]) if flag else None,
            )
        )
    return DigitalNet(b=b, m=m, matrices=tuple(matrices), depth=depth or 0)


def load_net(path: Union[str, Path], depth: Optional[int] = None) -> DigitalNet:
    return parse_net(Path(path).read_text(), depth=depth)


def save_net(net: DigitalNet, path: Union[str, Path]) -> None:
    Path(path).write_text(format_net(net))
