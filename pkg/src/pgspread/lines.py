"""Plücker coordinates of the lines of PG(4, q) and their serial numbers.

A line is stored as the 10-tuple ``(p01, p02, p03, p04, p12, p13, p14, p23,
p24, p34)`` of residues mod ``q``, scaled so the first nonzero entry is 1.
The position of that leading 1 splits the lines into ten type groups
(I..X).  Serials run through the groups in order; inside a group the free
coordinates are read as base-``q`` digits of the offset, first listed free
coordinate least significant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import InvalidLineError, NotALineError, SerialRangeError
from .field import FieldElement, Prime, check_prime, inverse_table

COORD_NAMES = ("p01", "p02", "p03", "p04", "p12", "p13", "p14", "p23", "p24", "p34")
P01, P02, P03, P04, P12, P13, P14, P23, P24, P34 = range(10)

#: coordinate positions with a 4 in the index; all zero iff the line is in x4 = 0
X4_POSITIONS = (P04, P14, P24, P34)

# (i, j, k, l) -> p_ij p_kl - p_ik p_jl + p_il p_jk, one per 4-subset of {0..4}
RELATIONS = (
    ((P01, P23), (P02, P13), (P03, P12)),
    ((P01, P24), (P02, P14), (P04, P12)),
    ((P01, P34), (P03, P14), (P04, P13)),
    ((P02, P34), (P03, P24), (P04, P23)),
    ((P12, P34), (P13, P24), (P14, P23)),
)


class TypeGroup(NamedTuple):
    tag: str
    lead: int
    free: tuple[int, ...]
    # derived coordinate -> ((sign, a, b), ...) meaning sum(sign * p_a * p_b)
    derived: tuple[tuple[int, tuple[tuple[int, int, int], ...]], ...]


TYPE_GROUPS = (
    TypeGroup("I", P01, (P02, P03, P04, P12, P13, P14), (
        (P23, ((1, P02, P13), (-1, P03, P12))),
        (P24, ((1, P02, P14), (-1, P04, P12))),
        (P34, ((1, P03, P14), (-1, P04, P13))),
    )),
    TypeGroup("II", P02, (P03, P04, P12, P23, P24), (
        (P13, ((1, P03, P12),)),
        (P14, ((1, P04, P12),)),
        (P34, ((1, P03, P24), (-1, P04, P23))),
    )),
    TypeGroup("III", P03, (P04, P13, P23, P34), (
        (P12, ()),
        (P14, ((1, P04, P13),)),
        (P24, ((1, P04, P23),)),
    )),
    TypeGroup("IV", P04, (P14, P24, P34), (
        (P12, ()),
        (P13, ()),
        (P23, ()),
    )),
    TypeGroup("V", P12, (P13, P14, P23, P24), (
        (P34, ((1, P13, P24), (-1, P14, P23))),
    )),
    TypeGroup("VI", P13, (P14, P23, P34), (
        (P24, ((1, P14, P23),)),
    )),
    TypeGroup("VII", P14, (P24, P34), (
        (P23, ()),
    )),
    TypeGroup("VIII", P23, (P24, P34), ()),
    TypeGroup("IX", P24, (P34,), ()),
    TypeGroup("X", P34, (), ()),
)


def line_count(q: int) -> int:
    """Number of lines of PG(4, q), as the sum of the ten group sizes."""
    return q**6 + q**5 + 2 * q**4 + 2 * q**3 + 2 * q**2 + q + 1


def gaussian_binomial_lines(q: int) -> int:
    """Number of 2-dimensional subspaces of GF(q)^5."""
    return (q**5 - 1) * (q**4 - 1) // ((q**2 - 1) * (q - 1))


@lru_cache(maxsize=None)
def group_sizes(q: int) -> tuple[int, ...]:
    return tuple(q ** len(g.free) for g in TYPE_GROUPS)


@lru_cache(maxsize=None)
def group_offsets(q: int) -> tuple[int, ...]:
    out, acc = [], 0
    for size in group_sizes(q):
        out.append(acc)
        acc += size
    return tuple(out)


@dataclass(frozen=True, slots=True)
class PluckerLine:
    q: int
    coords: tuple[int, ...]

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def group(self) -> TypeGroup:
        return TYPE_GROUPS[_leading(self.coords)]

    def elements(self) -> tuple[FieldElement, ...]:
        f = Prime(self.q)
        return tuple(f(v) for v in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def _leading(coords: Sequence[int]) -> int:
    for i, v in enumerate(coords):
        if v:
            return i
    raise InvalidLineError("all-zero coordinate vector")


def relation_values(coords: Sequence[int], q: int) -> tuple[int, ...]:
    return tuple(
        (coords[a] * coords[b] - coords[c] * coords[d] + coords[e] * coords[f]) % q
        for (a, b), (c, d), (e, f) in RELATIONS
    )


def canonicalize(raw: Sequence, q: int) -> PluckerLine:
    """Scale ``raw`` so its first nonzero entry is 1 and check it is a line."""
    q = check_prime(q)
    if len(raw) != 10:
        raise InvalidLineError(f"expected 10 coordinates, got {len(raw)}")
    vals = [int(v) % q for v in raw]
    if not any(vals):
        raise InvalidLineError("all-zero coordinate vector")
    s = pow(vals[_leading(vals)], -1, q)
    vals = tuple(v * s % q for v in vals)
    bad = [i for i, r in enumerate(relation_values(vals, q), 1) if r]
    if bad:
        raise NotALineError(f"{vals} violates Plücker relation(s) {bad}")
    return PluckerLine(q, vals)


def _check_serial(n: int, q: int) -> None:
    if not 0 <= n < line_count(q):
        raise SerialRangeError(f"serial {n} outside [0, {line_count(q)}) for q={q}")


def decode(n: int, q: int) -> PluckerLine:
    q = check_prime(q)
    n = int(n)
    _check_serial(n, q)
    offsets = group_offsets(q)
    g = 9
    while offsets[g] > n:
        g -= 1
    group = TYPE_GROUPS[g]
    i = n - offsets[g]
    c = [0] * 10
    c[group.lead] = 1
    for pos in group.free:
        i, c[pos] = divmod(i, q)
    for pos, terms in group.derived:
        c[pos] = sum(s * c[a] * c[b] for s, a, b in terms) % q
    return PluckerLine(q, tuple(c))


def encode(line: PluckerLine | Sequence[int], q: int | None = None) -> int:
    """Serial number of a canonical line; raises for anything else."""
    if isinstance(line, PluckerLine):
        q = line.q if q is None else q
        coords = line.coords
    else:
        coords = tuple(int(v) for v in line)
    if q is None:
        raise TypeError("q is required for raw coordinate tuples")
    q = check_prime(q)
    if len(coords) != 10 or any(not 0 <= v < q for v in coords):
        raise InvalidLineError(f"{coords} is not a vector of residues mod {q}")
    g = _leading(coords)
    if coords[g] != 1:
        raise InvalidLineError(f"{coords} is not canonical (leading entry {coords[g]})")
    group = TYPE_GROUPS[g]
    for pos, terms in group.derived:
        if coords[pos] != sum(s * coords[a] * coords[b] for s, a, b in terms) % q:
            raise NotALineError(f"{coords} is not a line of PG(4,{q})")
    n = 0
    for pos in reversed(group.free):
        n = n * q + coords[pos]
    return group_offsets(q)[g] + n


def enumerate_all(q: int) -> Iterator[PluckerLine]:
    """Yield every line of PG(4, q) in serial order."""
    q = check_prime(q)
    for n in range(line_count(q)):
        yield decode(n, q)


def format_line(n: int, line: PluckerLine) -> str:
    return f"{n}: " + " ".join(map(str, line.coords))


# --- vectorised codec -------------------------------------------------------

def decode_many(serials, q: int) -> np.ndarray:
    """Decode an array of serials into an ``(m, 10)`` int64 coordinate array."""
    q = check_prime(q)
    n = np.asarray(serials, dtype=np.int64)
    if n.size and (n.min() < 0 or n.max() >= line_count(q)):
        raise SerialRangeError(f"serial outside [0, {line_count(q)}) for q={q}")
    offsets = np.array(group_offsets(q), dtype=np.int64)
    g = np.searchsorted(offsets, n, side="right") - 1
    out = np.zeros((n.size, 10), dtype=np.int64)
    for gi, group in enumerate(TYPE_GROUPS):
        rows = np.nonzero(g == gi)[0]
        if rows.size == 0:
            continue
        i = n[rows] - offsets[gi]
        block = np.zeros((rows.size, 10), dtype=np.int64)
        block[:, group.lead] = 1
        for pos in group.free:
            block[:, pos] = i % q
            i //= q
        for pos, terms in group.derived:
            acc = np.zeros(rows.size, dtype=np.int64)
            for s, a, b in terms:
                acc += s * block[:, a] * block[:, b]
            block[:, pos] = acc % q
        out[rows] = block
    return out


def encode_many(coords: np.ndarray, q: int) -> np.ndarray:
    """Serials of an ``(m, 10)`` array of canonical line coordinates.

    Rows are trusted to be canonical lines; use :func:`encode` to validate.
    """
    c = np.asarray(coords, dtype=np.int64)
    lead = np.argmax(c != 0, axis=1)
    offsets = np.array(group_offsets(q), dtype=np.int64)
    out = offsets[lead].copy()
    for gi, group in enumerate(TYPE_GROUPS):
        rows = np.nonzero(lead == gi)[0]
        if rows.size == 0:
            continue
        acc = np.zeros(rows.size, dtype=np.int64)
        for pos in reversed(group.free):
            acc = acc * q + c[rows, pos]
        out[rows] += acc
    return out


def canonicalize_many(coords: np.ndarray, q: int) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    c = np.asarray(coords, dtype=np.int64) % q
    lead = np.argmax(c != 0, axis=1)
    s = inverse_table(q)[c[np.arange(len(c)), lead]]
    return c * s[:, None] % q


@lru_cache(maxsize=4)
def line_table(q: int) -> np.ndarray:
    """Dense ``(N(q), 10)`` uint8 table of all lines, indexed by serial."""
    q = check_prime(q)
    total = line_count(q)
    table = np.empty((total, 10), dtype=np.uint8)
    step = 1 << 20
    for start in range(0, total, step):
        stop = min(total, start + step)
        table[start:stop] = decode_many(np.arange(start, stop), q)
    table.flags.writeable = False
    return table
