"""
Sobol' generating matrices over Z_2 from Joe-Kuo style direction numbers.

The default table is the Joe-Kuo D(6) set for 21201 dimensions shipped
with SciPy; any file in the published text format can replace it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import DirectionFileError
from app.qmc.net import DigitalNet, GeneratingMatrix

logger = logging.getLogger(__name__)

HEADER = "d       s       a       m_i"


@dataclass(frozen=True)
class DirectionNumberRecord:
    """One line `d s a m_1 ... m_s` of a direction-number file."""

    d: int
    s: int
    a: int
    m: tuple[int, ...]

    def validate(self) -> None:
        if self.d < 2:
            raise DirectionFileError(f"dimension index must be >= 2, got {self.d}")
        if self.s < 1 or len(self.m) != self.s:
            raise DirectionFileError(
                f"dimension {self.d}: degree {self.s} needs {self.s} initial values, got {len(self.m)}"
            )
        if not 0 <= self.a < 2 ** (self.s - 1):
            raise DirectionFileError(f"dimension {self.d}: polynomial code {self.a} out of range")
        for i, mi in enumerate(self.m, start=1):
            if mi <= 0 or mi % 2 == 0:
                raise DirectionFileError(f"dimension {self.d}: m_{i} = {mi} is not odd and positive")
            if mi >= 2**i:
                raise DirectionFileError(f"dimension {self.d}: m_{i} = {mi} is not below 2^{i}")

    def format(self) -> str:
        return "\t".join(str(v) for v in (self.d, self.s, self.a, *self.m))


def _check_order(records: Sequence[DirectionNumberRecord]) -> None:
    for expected, rec in enumerate(records, start=2):
        if rec.d != expected:
            raise DirectionFileError(f"dimensions out of order: expected {expected}, found {rec.d}")


def parse_directions(text: str) -> list[DirectionNumberRecord]:
    """Parse a direction-number table; the first line is a header."""
    records = []
    for lineno, line in enumerate(text.splitlines()[1:], start=2):
        if not line.strip():
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise DirectionFileError(f"line {lineno}: malformed record {line!r}") from exc
        if len(values) < 4:
            raise DirectionFileError(f"line {lineno}: malformed record {line!r}")
        rec = DirectionNumberRecord(d=values[0], s=values[1], a=values[2], m=tuple(values[3:]))
        rec.validate()
        records.append(rec)
    _check_order(records)
    return records


def load_directions(path: Union[str, Path]) -> list[DirectionNumberRecord]:
    path = Path(path)
    if not path.exists():
        raise DirectionFileError(f"direction-number file {path} does not exist")
    records = parse_directions(path.read_text())
    logger.info("loaded %d direction-number records from %s", len(records), path)
    return records


def write_directions(records: Sequence[DirectionNumberRecord], path: Union[str, Path]) -> None:
    lines = [HEADER] + [rec.format() for rec in records]
    Path(path).write_text("\n".join(lines) + "\n")


@lru_cache(maxsize=4)
def bundled_directions(max_dim: int = 1111) -> tuple[DirectionNumberRecord, ...]:
    """Records for dimensions 2..max_dim from SciPy's Joe-Kuo table."""
    source = resources.files("scipy.stats") / "_sobol_direction_numbers.npz"
    with resources.as_file(source) as path, np.load(path) as table:
        poly = table["poly"]
        vinit = table["vinit"]
    if max_dim > len(poly):
        raise DirectionFileError(f"the bundled table covers {len(poly)} dimensions, asked {max_dim}")
    records = []
    for idx in range(1, max_dim):
        p = int(poly[idx])
        degree = p.bit_length() - 1
        a = (p >> 1) & ((1 << (degree - 1)) - 1)
        rec = DirectionNumberRecord(
            d=idx + 1, s=degree, a=a, m=tuple(int(v) for v in vinit[idx][:degree])
        )
        rec.validate()
        records.append(rec)
    return tuple(records)


def default_directions(s: int, dirfile: Optional[Union[str, Path]] = None) -> Sequence[DirectionNumberRecord]:
    """Records from dirfile, else SOBOL_DIRECTION_FILE, else the bundled table."""
    path = dirfile or settings.SOBOL_DIRECTION_FILE
    if path:
        return load_directions(path)
    return bundled_directions(max(s, 2))


def direction_integers(rec: DirectionNumberRecord, count: int) -> list[int]:
    """m_1, ..., m_count from the primitive-polynomial recurrence."""
    m = list(rec.m[:count])
    s = rec.s
    coeffs = [(rec.a >> (s - 1 - k)) & 1 for k in range(1, s)]
    for j in range(s, count):
        value = m[j - s] ^ (m[j - s] << s)
        for k in range(1, s):
            if coeffs[k - 1]:
                value ^= m[j - k] << k
        m.append(value)
    return m


def _matrix_from_integers(m_values: Sequence[int]) -> GeneratingMatrix:
    # column r holds the binary digits of v_{r+1} = m_{r+1} / 2^(r+1)
    cols = len(m_values)
    rows = []
    for i in range(cols):
        rows.append(
            tuple((m_values[r] >> (r - i)) & 1 if i <= r else 0 for r in range(cols))
        )
    return GeneratingMatrix(b=2, m=cols, rows=tuple(rows))


def sobol_matrices(
    records: Sequence[DirectionNumberRecord], s: int, m: int
) -> list[GeneratingMatrix]:
    """s upper-triangular matrices with m rows; dimension 1 is the identity."""
    if s < 1 or m < 1:
        raise DirectionFileError(f"need s >= 1 and m >= 1, got s={s}, m={m}")
    if len(records) < s - 1:
        raise DirectionFileError(f"{len(records)} records cannot cover dimension {s}")
    matrices = [_matrix_from_integers([1] * m)]
    for rec in records[: s - 1]:
        matrices.append(_matrix_from_integers(direction_integers(rec, m)))
    return matrices


def sobol_net(
    s: int,
    m: int,
    records: Optional[Sequence[DirectionNumberRecord]] = None,
    depth: Optional[int] = None,
) -> DigitalNet:
    """The first 2^m Sobol' points in natural order as a digital net."""
    if records is None:
        records = default_directions(s)
    return DigitalNet(b=2, m=m, matrices=tuple(sobol_matrices(records, s, m)), depth=depth or 0)
