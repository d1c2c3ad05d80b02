"""Lines of PG(3, q), the stored spread tables, and the embedding into x4 = 0.

A PG(3, q) line is the 6-tuple ``(p01, p02, p03, p12, p13, p23)``.  Line
number ``i`` (``0 <= i < q^4``) has ``p01 = 1`` and reads ``p02, p03, p12,
p13`` as base-``q`` digits of ``i``; ``p23`` follows from the Plücker
relation.  Spreads are stored as ``q^2`` such indices, completed by the line
``(0,0,0,0,0,1)`` which is skew to every line with ``p01 = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataCorruptionError, InvalidLineError, SerialRangeError
from .field import check_prime
from .incidence import hyperplane_mask, line_points_many, meets_many
from .lines import PluckerLine

CLOSING_LINE = (0, 0, 0, 0, 0, 1)


@dataclass(frozen=True, slots=True)
class Pg3Line:
    q: int
    coords: tuple[int, ...]

    def __post_init__(self):
        c = self.coords
        if len(c) != 6 or not any(c):
            raise InvalidLineError(f"{c} is not a PG(3,{self.q}) line vector")
        if (c[0] * c[5] - c[1] * c[4] + c[2] * c[3]) % self.q:
            raise InvalidLineError(f"{c} violates the Plücker relation")

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def pg3_line_from_index(i: int, q: int) -> Pg3Line:
    q = check_prime(q)
    if not 0 <= i < q**4:
        raise SerialRangeError(f"PG(3,{q}) line index {i} outside [0, {q**4})")
    p02, p03, p12, p13 = (i // q**k % q for k in range(4))
    return Pg3Line(q, (1, p02, p03, p12, p13, (p02 * p13 - p03 * p12) % q))


def pg3_lines_meet(a: Pg3Line, b: Pg3Line) -> bool:
    x, y = a.coords, b.coords
    v = (x[0] * y[5] + y[0] * x[5] - x[1] * y[4] - y[1] * x[4] + x[2] * y[3] + y[2] * x[3])
    return v % a.q == 0


def embed_in_pg4(line: Pg3Line) -> PluckerLine:
    p01, p02, p03, p12, p13, p23 = line.coords
    return PluckerLine(line.q, (p01, p02, p03, 0, p12, p13, 0, p23, 0, 0))


@dataclass(frozen=True)
class SpreadTable:
    q: int
    serials: tuple[int, ...]

    def lines(self) -> list[Pg3Line]:
        out = [pg3_line_from_index(i, self.q) for i in self.serials]
        out.append(Pg3Line(self.q, CLOSING_LINE))
        return out


def parse_spread_table(text: str, source: str = "<string>") -> SpreadTable:
    rows = [r.strip() for r in text.splitlines() if r.strip()]
    if len(rows) != 2 or not rows[0].startswith("q="):
        raise DataCorruptionError(f"{source}: expected 'q=<p>' then one serial row")
    try:
        q = int(rows[0][2:])
        serials = tuple(int(v) for v in rows[1].split(","))
    except ValueError as exc:
        raise DataCorruptionError(f"{source}: {exc}") from None
    return SpreadTable(q, serials)


def _data_dir() -> Path:
    return Path(str(resources.files("pgspread") / "data"))


def shipped_spread_path(q: int) -> Path:
    return _data_dir() / "spreads" / f"q{q}.txt"


def load_spread_table(q: int, path: str | Path | None = None) -> SpreadTable:
    path = Path(path) if path is not None else shipped_spread_path(q)
    table = parse_spread_table(path.read_text(), str(path))
    if table.q != q:
        raise DataCorruptionError(f"{path}: header says q={table.q}, expected {q}")
    problems = validate_spread(table.lines(), q)
    if problems:
        raise DataCorruptionError(f"{path}: " + "; ".join(problems))
    return table


def validate_spread(lines: Sequence[Pg3Line], q: int) -> list[str]:
    """Problems preventing ``lines`` from being a spread of PG(3, q); empty if none."""
    problems = []
    if len(lines) != q * q + 1:
        problems.append(f"{len(lines)} lines, expected {q * q + 1}")
    coords = np.array([embed_in_pg4(l).coords for l in lines], dtype=np.int64)
    for k in range(len(coords) - 1):
        hits = np.nonzero(meets_many(coords[k], coords[k + 1:], q))[0]
        for h in hits:
            problems.append(f"lines {lines[k]} and {lines[k + 1 + h]} meet")
    pts = line_points_many(coords, q).ravel()
    covered = np.zeros(len(hyperplane_mask(q)), dtype=bool)
    covered[pts] = True
    missing = int((hyperplane_mask(q) & ~covered).sum())
    if missing:
        problems.append(f"{missing} points of PG(3,{q}) uncovered")
    return problems


def find_spread_bruteforce(q: int) -> list[Pg3Line]:
    """Lexicographically first spread by backtracking over line indices.

    Candidates are the ``q^4`` indexed lines, tried in ascending order; the
    closing line is appended at the end.
    """
    q = check_prime(q)
    cand = np.array([embed_in_pg4(pg3_line_from_index(i, q)).coords for i in range(q**4)])
    masks = [sum(1 << int(p) for p in row) for row in line_points_many(cand, q)]
    closing = embed_in_pg4(Pg3Line(q, CLOSING_LINE)).coords
    closing_mask = sum(1 << int(p) for p in line_points_many(np.array([closing]), q)[0])
    hyper = np.nonzero(hyperplane_mask(q))[0]
    full = sum(1 << int(p) for p in hyper)
    need = q * q
    chosen: list[int] = []

    def lowest_uncovered(covered: int) -> int:
        free = full & ~covered
        return (free & -free).bit_length() - 1

    def search(start: int, covered: int) -> bool:
        if len(chosen) == need:
            return True
        bit = 1 << lowest_uncovered(covered)
        # a spread must cover that point with some later index, so look ahead
        if not any(masks[i] & bit and not masks[i] & covered for i in range(start, len(masks))):
            return False
        for i in range(start, len(masks)):
            if masks[i] & covered:
                continue
            chosen.append(i)
            if search(i + 1, covered | masks[i]):
                return True
            chosen.pop()
        return False

    if not search(0, closing_mask):
        raise RuntimeError(f"no spread of PG(3,{q}) found")
    return [pg3_line_from_index(i, q) for i in chosen] + [Pg3Line(q, CLOSING_LINE)]


def has_spread_table(q: int) -> bool:
    return shipped_spread_path(q).exists()


def build_spread(q: int) -> list[Pg3Line]:
    """Starting spread of PG(3, q): the shipped table, else a backtracking search."""
    q = check_prime(q)
    if has_spread_table(q):
        return load_spread_table(q).lines()
    return find_spread_bruteforce(q)
