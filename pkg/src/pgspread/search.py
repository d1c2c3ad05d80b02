"""Greedy construction of q-added maximal partial spreads of PG(4, q).

Start from a spread of the hyperplane x4 = 0.  Each step removes one of its
lines ``r`` and covers the q+1 points of ``r`` with lines leaving the
hyperplane, each skew to everything already present.  Ties are always broken
towards the lowest serial (points of ``r`` in ascending rank, candidate
lines in ascending serial), so runs are reproducible.

A line is skew to every member of a partial spread iff none of its points is
covered, so all skewness tests here are lookups in a point-coverage array.
"""
from __future__ import annotations

import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .field import check_prime
from .incidence import (ProjectivePoint, hyperplane_mask, line_points_many,
                        lines_through_point, point_count, point_unrank)
from .lines import PluckerLine, decode, decode_many, encode, line_count, line_table
from .pg3 import Pg3Line, build_spread, embed_in_pg4

log = logging.getLogger(__name__)


class PartialSpread:
    """Ordered set of pairwise skew lines with a point-coverage index."""

    def __init__(self, q: int, serials: Iterable[int] = ()):
        self.q = check_prime(q)
        self.covered = np.zeros(point_count(self.q), dtype=bool)
        self._points: dict[int, np.ndarray] = {}
        for n in serials:
            self.add(n)

    @classmethod
    def from_lines(cls, lines: Iterable[PluckerLine], q: int) -> "PartialSpread":
        return cls(q, (encode(l) for l in lines))

    @property
    def serials(self) -> list[int]:
        return list(self._points)

    def __len__(self) -> int:
        return len(self._points)

    def __contains__(self, n: int) -> bool:
        return n in self._points

    def points(self, n: int) -> np.ndarray:
        return self._points[n]

    def add(self, n: int) -> None:
        n = int(n)
        if n in self._points:
            raise ValueError(f"line {n} already present")
        pts = line_points_many(decode_many([n], self.q), self.q)[0]
        if self.covered[pts].any():
            raise ValueError(f"line {n} meets the partial spread")
        self.covered[pts] = True
        self._points[n] = pts

    def remove(self, n: int) -> None:
        pts = self._points.pop(int(n))
        self.covered[pts] = False

    def copy(self) -> "PartialSpread":
        other = PartialSpread(self.q)
        other.covered = self.covered.copy()
        other._points = dict(self._points)
        return other

    def lines(self) -> list[PluckerLine]:
        return [decode(n, self.q) for n in self._points]


def starting_spread(q: int, spread: Sequence[Pg3Line] | None = None) -> PartialSpread:
    spread = build_spread(q) if spread is None else spread
    return PartialSpread.from_lines((embed_in_pg4(l) for l in spread), q)


def find_skew_line_through(x: ProjectivePoint, current: PartialSpread) -> PluckerLine | None:
    """Lowest-serial line through ``x``, off x4 = 0, skew to all of ``current``.

    ``x`` must lie on the hyperplane and be uncovered.  Returns None when all
    q^3 candidates meet ``current``.
    """
    q = current.q
    if not x.in_hyperplane():
        raise ValueError(f"{x} is not on the hyperplane x4 = 0")
    if current.covered[x.rank]:
        raise ValueError(f"{x} is already covered")
    serials, pts = lines_through_point(x, q)
    ok = ~current.covered[pts].any(axis=1) & ~hyperplane_mask(q)[pts].all(axis=1)
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        return None
    return decode(int(serials[hits[0]]), q)


@dataclass
class CoverResult:
    removed: Pg3Line
    added: list[int]
    stuck_point: ProjectivePoint | None = None

    @property
    def ok(self) -> bool:
        return self.stuck_point is None


def cover_removed_line(r: Pg3Line, current: PartialSpread) -> CoverResult:
    """Cover the points of a removed hyperplane line with skew off-hyperplane lines.

    ``current`` is left untouched.  On the first point that cannot be covered
    the result carries that point and the lines chosen so far.
    """
    work = current.copy()
    out = CoverResult(r, [])
    removed = embed_in_pg4(r)
    for rank in line_points_many(np.array([removed.coords]), current.q)[0]:
        if work.covered[rank]:
            continue
        x = point_unrank(int(rank), current.q)
        line = find_skew_line_through(x, work)
        if line is None:
            out.stuck_point = x
            return out
        n = encode(line)
        work.add(n)
        out.added.append(n)
    return out


@dataclass(frozen=True)
class StepRecord:
    t: int
    removed: Pg3Line
    added_serials: tuple[int, ...]
    size_after: int


@dataclass(frozen=True)
class FailureReport:
    t: int
    removed: Pg3Line
    stuck_point: ProjectivePoint
    partial: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"t": self.t, "removed": list(self.removed.coords),
                "stuck_point": list(self.stuck_point.coords), "partial": list(self.partial)}


@dataclass
class SearchTrace:
    q: int
    initial: list[int]
    steps: list[StepRecord] = field(default_factory=list)
    failures: list[FailureReport] = field(default_factory=list)

    @property
    def k_max(self) -> int:
        return len(self.steps)

    @property
    def sizes(self) -> list[int]:
        return [s.size_after for s in self.steps]

    def pairs(self) -> list[tuple[int, int]]:
        return [(s.t, n) for s in self.steps for n in s.added_serials]

    def final_serials(self) -> list[int]:
        return self.snapshot(self.k_max)

    def snapshot(self, t: int) -> list[int]:
        """Serials of the set after ``t`` completed steps."""
        out = list(self.initial)
        for s in self.steps[:t]:
            out.remove(encode(embed_in_pg4(s.removed)))
            out.extend(s.added_serials)
        return out

    def intermediate_sets(self) -> Iterator[tuple[int, int, list[int]]]:
        """Yield ``(t, added_so_far, serials)`` for every state the search passes through.

        Includes the start, each step right after removal and after every
        single added line, and the partial additions of a failed step.
        """
        cur = list(self.initial)
        yield 0, 0, list(cur)
        staged = [(s.t, s.removed, s.added_serials) for s in self.steps]
        staged += [(f.t, f.removed, f.partial) for f in self.failures]
        for t, removed, added in staged:
            base = [n for n in cur if n != encode(embed_in_pg4(removed))]
            yield t, 0, list(base)
            for k in range(1, len(added) + 1):
                yield t, k, base + list(added[:k])
            cur = base + list(added)

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        buf.write("t,n\n")
        for t, n in self.pairs():
            buf.write(f"{t},{n}\n")
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "q": self.q,
            "k_max_reached": self.k_max,
            "sizes": self.sizes,
            "failures": [f.as_dict() for f in self.failures],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2) + "\n"


def run_search(q: int, removal_order: Sequence[Pg3Line] | None = None,
               max_steps: int | None = None,
               spread: Sequence[Pg3Line] | None = None) -> SearchTrace:
    """Run the greedy q-added construction.

    ``removal_order`` defaults to the starting spread's own order.  The run
    stops after ``max_steps`` steps, when the order is exhausted, or at the
    first step that cannot cover its removed line; that step is recorded as a
    failure and the set stays at the last completed step.
    """
    q = check_prime(q)
    spread = list(build_spread(q) if spread is None else spread)
    order = list(spread if removal_order is None else removal_order)
    current = starting_spread(q, spread)
    trace = SearchTrace(q, current.serials)
    for t, r in enumerate(order, 1):
        if max_steps is not None and t > max_steps:
            break
        rn = encode(embed_in_pg4(r))
        if rn not in current:
            raise ValueError(f"removal line {r} is not a member of the current set")
        current.remove(rn)
        res = cover_removed_line(r, current)
        if not res.ok:
            log.info("q=%d step %d stuck at %s after %d lines", q, t, res.stuck_point, len(res.added))
            trace.failures.append(FailureReport(t, r, res.stuck_point, tuple(res.added)))
            current.add(rn)
            break
        for n in res.added:
            current.add(n)
        trace.steps.append(StepRecord(t, r, tuple(res.added), len(current)))
    return trace


# --- maximality -------------------------------------------------------------

@dataclass(frozen=True)
class Maximality:
    maximal: bool
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.maximal


def is_maximal(s: PartialSpread) -> Maximality:
    """Whether no line of PG(4, q) is skew to every member of ``s``.

    Every line meets the hyperplane x4 = 0, so an addable line passes through
    an uncovered point of it; only lines through those points are examined.
    The witness is the lowest addable serial.
    """
    q = s.q
    best = None
    for rank in np.nonzero(hyperplane_mask(q) & ~s.covered)[0]:
        serials, pts = lines_through_point(point_unrank(int(rank), q), q)
        free = np.nonzero(~s.covered[pts].any(axis=1))[0]
        if free.size:
            n = int(serials[free[0]])
            best = n if best is None else min(best, n)
    return Maximality(best is None, best)


def _scan_chunk(table: np.ndarray, covered: np.ndarray, q: int, start: int, stop: int) -> int | None:
    pts = line_points_many(table[start:stop], q)
    free = np.nonzero(~covered[pts].any(axis=1))[0]
    return start + int(free[0]) if free.size else None


def is_maximal_full_scan(s: PartialSpread, threads: int = 1, chunk: int = 1 << 16) -> Maximality:
    """Maximality by testing every line of PG(4, q); the witness is the lowest addable serial."""
    q = s.q
    table = line_table(q)
    total = line_count(q)
    bounds = [(a, min(total, a + chunk)) for a in range(0, total, chunk)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = list(pool.map(lambda b: _scan_chunk(table, s.covered, q, *b), bounds))
    else:
        found = []
        for b in bounds:
            found.append(_scan_chunk(table, s.covered, q, *b))
            if found[-1] is not None:
                break
    hits = [f for f in found if f is not None]
    return Maximality(not hits, min(hits) if hits else None)
