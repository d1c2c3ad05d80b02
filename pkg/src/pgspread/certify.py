"""Certify published q-added maximal partial spreads from their ``t,n`` data.

A result file lists, for each step ``t``, the serials of the q+1 lines added
when the t-th hyperplane line was removed.  The removed line itself is not
recorded; it is recovered as the unique surviving spread line that all q+1
lines of the step meet.
"""
from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataInconsistencyError, ResultFormatError
from .field import check_prime
from .incidence import line_in_hyperplane, line_points_many, meets_many
from .lines import decode_many, encode, group_offsets, line_count
from .pg3 import Pg3Line, _data_dir, build_spread, embed_in_pg4
from .search import PartialSpread, is_maximal, is_maximal_full_scan


SERIAL_CONVENTIONS = ("published", "canonical")


def published_to_canonical(n: int, q: int) -> int:
    """Map a serial as printed in the published result tables to the codec's serial.

    The published tables number group V with its slowest digit (``p24``)
    shifted down by one mod ``q``; every other group matches the codec.
    """
    off = group_offsets(q)[4]
    size = q**4
    if off <= n < off + size:
        return off + (n - off + q**3) % size
    return n


def canonical_to_published(n: int, q: int) -> int:
    off = group_offsets(q)[4]
    size = q**4
    if off <= n < off + size:
        return off + (n - off - q**3) % size
    return n


@dataclass
class PublishedResultSet:
    """Step/serial pairs exactly as stored, plus how to read the serials."""

    q: int
    pairs: list[tuple[int, int]]
    convention: str = "published"

    def __post_init__(self):
        if self.convention not in SERIAL_CONVENTIONS:
            raise ValueError(f"unknown serial convention {self.convention!r}")

    def canonical_pairs(self) -> list[tuple[int, int]]:
        if self.convention == "canonical":
            return list(self.pairs)
        return [(t, published_to_canonical(n, self.q)) for t, n in self.pairs]

    @property
    def remapped(self) -> int:
        return sum(a != b for (_, a), (_, b) in zip(self.pairs, self.canonical_pairs()))

    @property
    def k_max(self) -> int:
        return max((t for t, _ in self.pairs), default=0)

    @property
    def expected_sizes(self) -> list[tuple[int, int]]:
        q = self.q
        return [(t, q * q + t * q + 1) for t in range(1, self.k_max + 1)]

    def step(self, t: int) -> list[int]:
        """Codec serials of the lines added at step ``t``."""
        return [n for s, n in self.canonical_pairs() if s == t]


def shipped_results_path(q: int) -> Path:
    return _data_dir() / "results" / f"q{q}.csv"


def parse_results(text: str, q: int, source: str = "<string>",
                  convention: str = "published") -> PublishedResultSet:
    q = check_prime(q)
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["t", "n"]:
        raise ResultFormatError(f"{source}: missing 't,n' header")
    pairs = []
    total = line_count(q)
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != 2:
            raise ResultFormatError(f"{source}:{lineno}: expected 2 fields, got {row!r}")
        try:
            t, n = int(row[0]), int(row[1])
        except ValueError:
            raise ResultFormatError(f"{source}:{lineno}: non-integer field in {row!r}") from None
        if t < 1:
            raise ResultFormatError(f"{source}:{lineno}: step {t} < 1")
        if not 0 <= n < total:
            raise ResultFormatError(f"{source}:{lineno}: serial {n} outside [0, {total})")
        if pairs and t < pairs[-1][0]:
            raise ResultFormatError(f"{source}:{lineno}: step {t} after step {pairs[-1][0]}")
        pairs.append((t, n))
    counts = Counter(t for t, _ in pairs)
    k = max(counts, default=0)
    for t in range(1, k + 1):
        if counts[t] != q + 1:
            raise ResultFormatError(
                f"{source}: step {t} has {counts[t]} lines, expected {q + 1}")
    return PublishedResultSet(q, pairs, convention)


def load_results(path: str | Path, q: int | None = None,
                 convention: str = "published") -> PublishedResultSet:
    path = Path(path)
    if q is None:
        m = re.fullmatch(r"q(\d+)\.csv", path.name)
        if not m:
            raise ResultFormatError(f"{path}: cannot infer q from file name")
        q = int(m.group(1))
    return parse_results(path.read_text(), q, str(path), convention)


def _step_targets(rs: PublishedResultSet, t: int, surviving: list[Pg3Line]) -> list[int]:
    """Indices into ``surviving`` of the lines met by every step-t line."""
    q = rs.q
    spread = np.array([embed_in_pg4(l).coords for l in surviving])
    hit = np.ones(len(surviving), dtype=bool)
    for row in decode_many(rs.step(t), q):
        hit &= meets_many(row, spread, q)
    return [int(i) for i in np.nonzero(hit)[0]]


def infer_removal_order(rs: PublishedResultSet, spread: Sequence[Pg3Line] | None = None,
                        upto_t: int | None = None) -> list[Pg3Line]:
    spread = list(build_spread(rs.q) if spread is None else spread)
    upto_t = rs.k_max if upto_t is None else upto_t
    surviving = list(spread)
    order = []
    for t in range(1, upto_t + 1):
        idx = _step_targets(rs, t, surviving)
        if len(idx) != 1:
            raise DataInconsistencyError(
                f"step {t}: lines {rs.step(t)} meet {len(idx)} common spread lines, expected 1")
        order.append(surviving.pop(idx[0]))
    return order


@dataclass
class Certificate:
    q: int
    upto_t: int
    serial_convention: str = "published"
    remapped: int = 0
    size: int = 0
    checks: dict = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    removal_order: list[Pg3Line] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"q": self.q, "upto_t": self.upto_t, "size": self.size,
                "serial_convention": self.serial_convention, "remapped": self.remapped,
                "checks": dict(self.checks), "violations": list(self.violations)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        out = [f"q={self.q} upto_t={self.upto_t} size={self.size} "
               f"result={'PASS' if self.ok else 'FAIL'}",
               f"  serials read as {self.serial_convention} ({self.remapped} remapped)"]
        for name, value in self.checks.items():
            shown = value if isinstance(value, str) else ("ok" if value else "FAILED")
            out.append(f"  {name:<15} {shown}")
        out += [f"  violation: {v}" for v in self.violations]
        return "\n".join(out) + "\n"


def certify(rs: PublishedResultSet, upto_t: int | None = None, maximality: str = "auto",
            spread: Sequence[Pg3Line] | None = None, threads: int = 1) -> Certificate:
    """Rebuild the set after ``upto_t`` steps and check it.

    ``maximality`` is ``"auto"`` (checked only when ``upto_t`` is the last
    step), ``"skip"``, or ``"full"`` (checked, and cross-checked against a
    scan of every line).  Violations quote serials as stored in ``rs``.
    """
    if maximality not in ("auto", "skip", "full"):
        raise ValueError(f"unknown maximality mode {maximality!r}")
    q = rs.q
    upto_t = rs.k_max if upto_t is None else upto_t
    if not 0 <= upto_t <= rs.k_max:
        raise ValueError(f"upto_t={upto_t} outside [0, {rs.k_max}]")
    kept = [i for i, (t, _) in enumerate(rs.pairs) if t <= upto_t]
    cert = Certificate(q, upto_t, rs.convention,
                       sum(rs.pairs[i][1] != rs.canonical_pairs()[i][1] for i in kept))
    bad = cert.violations
    surviving = list(build_spread(q) if spread is None else spread)

    canon = rs.canonical_pairs()
    added = [canon[i][1] for i in kept]
    stored = {canon[i][1]: rs.pairs[i][1] for i in kept}
    coords = decode_many(added, q).reshape(-1, 10)
    points = line_points_many(coords, q).reshape(-1, q + 1)
    by_serial = dict(zip(added, points))

    in_h = [n for n, row in zip(added, coords) if line_in_hyperplane(row)]
    for n in in_h:
        bad.append(f"off_hyperplane: line {stored[n]} lies in x4=0")
    cert.checks["off_hyperplane"] = not in_h

    coverage_ok = removal_ok = True
    for t in range(1, upto_t + 1):
        idx = _step_targets(rs, t, surviving)
        if len(idx) != 1:
            removal_ok = False
            names = [stored[n] for n in rs.step(t)]
            bad.append(f"removal: step {t} lines {names} meet {len(idx)} common spread lines")
            continue
        r = surviving.pop(idx[0])
        cert.removal_order.append(r)
        r_pts = line_points_many(np.array([embed_in_pg4(r).coords]), q)[0]
        hit = np.concatenate([by_serial[n] for n in rs.step(t)])
        missing = np.setdiff1d(r_pts, hit)
        if missing.size:
            coverage_ok = False
            bad.append(f"coverage: step {t} leaves {missing.size} point(s) of {r} uncovered")
    cert.checks["removal"] = removal_ok
    cert.checks["coverage"] = coverage_ok

    members = [embed_in_pg4(l).coords for l in surviving] + [tuple(r) for r in coords]
    names = [None] * len(surviving) + [stored[n] for n in added]
    table = np.array(members, dtype=np.int64)
    cert.size = len(table)
    skew_ok = True
    for k in range(len(table) - 1):
        for h in np.nonzero(meets_many(table[k], table[k + 1:], q))[0]:
            skew_ok = False
            bad.append(f"skew: {_name(names[k], table[k])} meets "
                       f"{_name(names[k + 1 + h], table[k + 1 + h])}")
    cert.checks["skew"] = skew_ok
    expected = q * q + upto_t * q + 1
    if cert.size != expected:
        bad.append(f"size: {cert.size} lines, expected {expected}")
    cert.checks["size"] = cert.size == expected

    do_max = maximality == "full" or (maximality == "auto" and upto_t == rs.k_max)
    if not do_max or not skew_ok:
        cert.checks["maximal"] = "skipped"
        return cert
    ps = PartialSpread(q, [encode(embed_in_pg4(l)) for l in surviving] + added)
    res = is_maximal(ps)
    if maximality == "full":
        scan = is_maximal_full_scan(ps, threads=threads)
        if scan != res:
            bad.append(f"maximal: uncovered-point check {res} and full scan {scan} disagree")
        res = scan
    cert.checks["maximal"] = res.maximal
    if not res.maximal:
        bad.append(f"maximal: line {res.witness} (codec serial) is skew to every member")
    return cert


def _name(serial, row) -> str:
    if serial is not None:
        return f"line {serial}"
    return "spread line (" + ",".join(map(str, row)) + ")"


def verify_checksums(names: Sequence[str] | None = None) -> list[str]:
    """Shipped result files whose SHA-256 differs from the recorded one."""
    import hashlib

    folder = _data_dir() / "results"
    recorded = {}
    for row in (folder / "SHA256SUMS").read_text().splitlines():
        digest, name = row.split()
        recorded[name] = digest
    names = sorted(recorded) if names is None else names
    return [n for n in names
            if hashlib.sha256((folder / n).read_bytes()).hexdigest() != recorded.get(n)]
