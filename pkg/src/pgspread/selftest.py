"""Invariant battery run by ``pgspread selftest``."""
from __future__ import annotations

import numpy as np

from .incidence import line_points_many, meets_many, meets_pairs, point_count
from .lines import (RELATIONS, encode_many, gaussian_binomial_lines, line_count,
                    line_table)


def meeting_count(q: int, serial: int) -> int:
    """Lines meeting line ``serial``, itself included."""
    table = line_table(q)
    return int(meets_many(table[serial], table, q).sum())


def expected_meeting_count(q: int) -> int:
    return (q**3 + q**2 + q) * (q + 1) + 1


def point_set_meets(pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    """Row-wise: do two lines, given by their point ranks, share a point."""
    return (pts_a[:, :, None] == pts_b[:, None, :]).any(axis=(1, 2))


def _primes_upto(n: int) -> list[int]:
    return [p for p in (2, 3, 5, 7, 11, 13) if p <= n]


def run(q_max: int = 5, seed: int = 0) -> list[tuple[str, bool]]:
    rng = np.random.default_rng(seed)
    out = []
    for q in _primes_upto(q_max):
        table = line_table(q)
        n = len(table)
        out.append((f"q={q} line count {n}",
                    n == line_count(q) == gaussian_binomial_lines(q)))
        out.append((f"q={q} encode(decode(n)) = n",
                    bool((encode_many(table, q) == np.arange(n)).all())))
        t = table.astype(np.int64)
        ok = all(((t[:, a] * t[:, b] - t[:, c] * t[:, d] + t[:, e] * t[:, f]) % q == 0).all()
                 for (a, b), (c, d), (e, f) in RELATIONS)
        out.append((f"q={q} Plücker relations", ok))
        pts = line_points_many(table, q)
        out.append((f"q={q} points covered {point_count(q)}",
                    len(np.unique(pts)) == point_count(q)))
        sample = rng.choice(n, size=10, replace=False)
        counts = [meeting_count(q, int(s)) for s in sample]
        out.append((f"q={q} meeting count {expected_meeting_count(q)} on 10 lines",
                    all(c == expected_meeting_count(q) for c in counts)))
        m = min(n, 20000)
        i, j = rng.integers(0, n, size=m), rng.integers(0, n, size=m)
        out.append((f"q={q} incidence = point-set intersection on {m} pairs",
                    bool((meets_pairs(table[i], table[j], q) == point_set_meets(pts[i], pts[j])).all())))
    return out
