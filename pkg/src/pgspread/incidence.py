"""Points of PG(4, q), incidence of lines, and the hyperplane x4 = 0.

Canonical points (first nonzero coordinate 1) are packed into a dense rank in
``[0, q^4 + q^3 + q^2 + q + 1)``: points are grouped by the position of the
leading 1 (x0 first) and the trailing coordinates are read as base-``q``
digits, nearest coordinate least significant.  Coverage of point sets is then
a flat boolean array indexed by rank.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidLineError
from .field import check_prime, inverse_table
from .lines import (P01, P02, P03, P04, P12, P13, P14, P23, P24, P34,
                    X4_POSITIONS, PluckerLine, canonicalize, canonicalize_many,
                    decode_many, encode_many)

PAIRS = ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

# one bilinear form per 4-subset of {0..4}; each term pairs a coordinate of one
# line with the complementary coordinate of the other
MEET_FORMS = (
    ((1, P01, P23), (-1, P02, P13), (1, P03, P12)),
    ((1, P01, P24), (-1, P02, P14), (1, P04, P12)),
    ((1, P01, P34), (-1, P03, P14), (1, P04, P13)),
    ((1, P02, P34), (-1, P03, P24), (1, P04, P23)),
    ((1, P12, P34), (-1, P13, P24), (1, P14, P23)),
)


def point_count(q: int, dim: int = 4) -> int:
    """Number of points of PG(dim, q)."""
    return (q ** (dim + 1) - 1) // (q - 1)


@lru_cache(maxsize=None)
def _rank_offsets(q: int) -> tuple[int, ...]:
    out, acc = [], 0
    for j in range(5):
        out.append(acc)
        acc += q ** (4 - j)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class ProjectivePoint:
    q: int
    coords: tuple[int, ...]

    @classmethod
    def of(cls, raw: Sequence[int], q: int) -> "ProjectivePoint":
        vals = [int(v) % q for v in raw]
        if len(vals) != 5:
            raise ValueError(f"expected 5 coordinates, got {len(vals)}")
        lead = next((v for v in vals if v), 0)
        if not lead:
            raise ValueError("the zero vector is not a point")
        s = pow(lead, -1, q)
        return cls(q, tuple(v * s % q for v in vals))

    @property
    def rank(self) -> int:
        return point_rank(self.coords, self.q)

    def in_hyperplane(self) -> bool:
        return self.coords[4] == 0

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def point_rank(coords: Sequence[int], q: int) -> int:
    j = next(i for i, v in enumerate(coords) if v)
    r = 0
    for v in reversed(coords[j + 1:]):
        r = r * q + v
    return _rank_offsets(q)[j] + r


def point_unrank(r: int, q: int) -> ProjectivePoint:
    offsets = _rank_offsets(q)
    j = max(i for i in range(5) if offsets[i] <= r)
    r -= offsets[j]
    c = [0] * 5
    c[j] = 1
    for k in range(j + 1, 5):
        r, c[k] = divmod(r, q)
    return ProjectivePoint(q, tuple(c))


def point_ranks_many(points: np.ndarray, q: int) -> np.ndarray:
    """Ranks of the points in an ``(..., 5)`` array of canonical coordinates."""
    p = np.asarray(points, dtype=np.int64)
    lead = np.argmax(p != 0, axis=-1)
    offsets = np.array(_rank_offsets(q), dtype=np.int64)
    r = np.zeros(lead.shape, dtype=np.int64)
    for k in range(4, 0, -1):
        # digit k only counts when it trails the leading coordinate
        r = np.where(k > lead, r * q + p[..., k], r)
    return offsets[lead] + r


def canonical_points_many(points: np.ndarray, q: int) -> np.ndarray:
    p = np.asarray(points, dtype=np.int64) % q
    lead = np.argmax(p != 0, axis=-1)
    s = inverse_table(q)[np.take_along_axis(p, lead[..., None], axis=-1)]
    return p * s % q


@lru_cache(maxsize=4)
def point_table(q: int) -> np.ndarray:
    """All canonical points of PG(4, q), row index = rank."""
    q = check_prime(q)
    rows = []
    for j in range(5):
        m = q ** (4 - j)
        block = np.zeros((m, 5), dtype=np.int64)
        block[:, j] = 1
        i = np.arange(m)
        for k in range(j + 1, 5):
            block[:, k] = i % q
            i //= q
        rows.append(block)
    table = np.concatenate(rows)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=4)
def hyperplane_mask(q: int) -> np.ndarray:
    """Boolean array over point ranks: True for points with x4 = 0."""
    m = point_table(q)[:, 4] == 0
    m.flags.writeable = False
    return m


# --- incidence --------------------------------------------------------------

def lines_meet(a: PluckerLine | Sequence[int], b: PluckerLine | Sequence[int], q: int | None = None) -> bool:
    """True iff the two lines share a point (a line meets itself)."""
    if q is None:
        q = a.q
    a, b = [int(v) for v in a], [int(v) for v in b]
    for (s1, i1, j1), (s2, i2, j2), (s3, i3, j3) in MEET_FORMS:
        v = (a[i1] * b[j1] + b[i1] * a[j1]
             - a[i2] * b[j2] - b[i2] * a[j2]
             + a[i3] * b[j3] + b[i3] * a[j3])
        if v % q:
            return False
    return True


def meets_many(line: Sequence[int], table: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask of the rows of ``table`` that meet ``line``."""
    a = [int(v) for v in line]
    t = np.asarray(table)
    hit = np.ones(len(t), dtype=bool)
    for terms in MEET_FORMS:
        acc = np.zeros(len(t), dtype=np.int64)
        for s, i, j in terms:
            acc += s * (a[i] * t[:, j].astype(np.int64) + a[j] * t[:, i].astype(np.int64))
        hit &= acc % q == 0
    return hit


def meets_pairs(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Row-wise incidence of two equally shaped ``(m, 10)`` arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    hit = np.ones(len(a), dtype=bool)
    for terms in MEET_FORMS:
        acc = np.zeros(len(a), dtype=np.int64)
        for s, i, j in terms:
            acc += s * (a[:, i] * b[:, j] + a[:, j] * b[:, i])
        hit &= acc % q == 0
    return hit


def line_in_hyperplane(line: PluckerLine | Sequence[int]) -> bool:
    return not any(line[i] for i in X4_POSITIONS)


# --- points on lines --------------------------------------------------------

def plucker_of(a: Sequence[int], b: Sequence[int], q: int) -> tuple[int, ...]:
    return tuple((a[i] * b[j] - a[j] * b[i]) % q for i, j in PAIRS)


def line_through(a: Sequence[int], b: Sequence[int], q: int) -> PluckerLine:
    """The line spanned by two distinct points."""
    raw = plucker_of(a, b, q)
    if not any(raw):
        raise ValueError(f"points {tuple(a)} and {tuple(b)} do not span a line")
    return canonicalize(raw, q)


def _antisymmetric(coords: Sequence[int], q: int) -> list[list[int]]:
    m = [[0] * 5 for _ in range(5)]
    for (i, j), v in zip(PAIRS, coords):
        m[i][j] = v % q
        m[j][i] = -v % q
    return m


def points_of_line(line: PluckerLine) -> list[ProjectivePoint]:
    """The q+1 points of ``line`` in ascending rank order."""
    q = line.q
    m = _antisymmetric(line.coords, q)
    cols = [tuple(m[r][c] for r in range(5)) for c in range(5)]
    cols = [c for c in cols if any(c)]
    if not cols:
        raise InvalidLineError(f"{line} has rank 0")
    a = cols[0]
    b = next((c for c in cols[1:] if any(plucker_of(a, c, q))), None)
    if b is None:
        raise InvalidLineError(f"{line} does not have rank 2")
    pts = {ProjectivePoint.of(a, q)}
    for t in range(q):
        pts.add(ProjectivePoint.of([(bv + t * av) % q for av, bv in zip(a, b)], q))
    return sorted(pts, key=lambda p: p.rank)


def span_points_many(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Point ranks of the lines spanned row-wise by ``a`` and ``b``.

    Returns an ``(m, q + 1)`` array whose first column is ``a`` and whose
    column ``t + 1`` is ``b + t a``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    t = np.arange(q, dtype=np.int64)
    pts = np.empty((len(a), q + 1, 5), dtype=np.int64)
    pts[:, 0] = a
    pts[:, 1:] = b[:, None, :] + t[None, :, None] * a[:, None, :]
    return point_ranks_many(canonical_points_many(pts, q), q)


def line_points_many(coords: np.ndarray, q: int) -> np.ndarray:
    """``(m, q + 1)`` point ranks of canonical lines, rows sorted ascending."""
    c = np.asarray(coords, dtype=np.int64)
    lead = np.argmax(c != 0, axis=1)
    m = np.zeros((len(c), 5, 5), dtype=np.int64)
    for k, (i, j) in enumerate(PAIRS):
        m[:, i, j] = c[:, k]
        m[:, j, i] = -c[:, k] % q
    pair = np.array(PAIRS)[lead]
    rows = np.arange(len(c))
    # columns i and j of the matrix for the leading p_ij = 1 are independent
    a = m[rows, :, pair[:, 0]]
    b = m[rows, :, pair[:, 1]]
    return np.sort(span_points_many(a, b, q), axis=1)


def lines_through_point(x: ProjectivePoint | Sequence[int], q: int) -> tuple[np.ndarray, np.ndarray]:
    """All lines through ``x``: ascending serials and their point ranks.

    Each line through ``x`` meets the coordinate hyperplane ``x_j = 0`` (``j``
    the leading position of ``x``) in exactly one point, so spanning ``x``
    with those points lists every line once.
    """
    xc = np.array(x.coords if isinstance(x, ProjectivePoint) else x, dtype=np.int64)
    j = int(np.argmax(xc != 0))
    others = point_table(q)
    others = others[others[:, j] == 0]
    a = np.broadcast_to(xc, others.shape)
    coords = _plucker_many(a, others, q)
    serials = encode_many(canonicalize_many(coords, q), q)
    pts = span_points_many(a, others, q)
    order = np.argsort(serials)
    return serials[order], pts[order]


def lines_through_point_off_hyperplane(x: ProjectivePoint) -> Iterator[PluckerLine]:
    """The q^3 lines through a point of x4 = 0 that leave the hyperplane."""
    q = x.q
    if not x.in_hyperplane():
        raise ValueError(f"{x} is not on the hyperplane x4 = 0")
    serials, pts = lines_through_point(x, q)
    off = ~hyperplane_mask(q)[pts].all(axis=1)
    for n, row in zip(serials[off], decode_many(serials[off], q)):
        yield PluckerLine(q, tuple(int(v) for v in row))


def _plucker_many(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    out = np.empty((len(a), 10), dtype=np.int64)
    for k, (i, j) in enumerate(PAIRS):
        out[:, k] = a[:, i] * b[:, j] - a[:, j] * b[:, i]
    return out % q
