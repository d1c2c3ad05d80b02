"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import itertools
import time

import numpy as np
import pytest

from pgspread.certify import certify, load_results, parse_results, shipped_results_path
from pgspread.incidence import line_in_hyperplane, line_points_many, lines_meet
from pgspread.lines import decode, encode_many, line_count, line_table
from pgspread.pg3 import load_spread_table, pg3_lines_meet, validate_spread
from pgspread.search import PartialSpread, is_maximal, is_maximal_full_scan, run_search, starting_spread
from pgspread.selftest import meeting_count


def pairwise_skew(serials, q):
    lines = [decode(n, q) for n in serials]
    return not any(lines_meet(a, b) for a, b in itertools.combinations(lines, 2))


def test_c1_line_count_identities(criterion):
    start = time.perf_counter()
    ok = True
    for q in (2, 3, 5, 7, 11, 13):
        total = len(line_table(q))
        column_sum = q**6 + q**5 + 2 * q**4 + 2 * q**3 + 2 * q**2 + q + 1
        gauss = (q**5 - 1) * (q**4 - 1) // ((q**2 - 1) * (q - 1))
        ok &= total == column_sum == gauss == line_count(q)
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 60
    criterion("C1 line counts", ok, f"q<=13 in {elapsed:.1f}s")
    assert ok


def test_c2_meeting_counts(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    ok = True
    for q, k in ((2, 10), (3, 10), (5, 10), (7, 3)):
        expected = (q**3 + q**2 + q) * (q + 1) + 1
        for n in rng.choice(line_count(q), size=k, replace=False):
            ok &= meeting_count(q, int(n)) == expected
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 30
    criterion("C2 meeting counts", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c3_shipped_spread_lists(criterion):
    start = time.perf_counter()
    ok = True
    for q in (3, 5, 7, 11, 13):
        lines = load_spread_table(q).lines()
        ok &= len(lines) == q * q + 1
        ok &= validate_spread(lines, q) == []
        ok &= not any(pg3_lines_meet(a, b) for a, b in itertools.combinations(lines, 2))
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    criterion("C3 spread lists", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c4_guaranteed_sizes(criterion):
    start = time.perf_counter()
    ok = True
    for q in (2, 3, 5, 7):
        trace = run_search(q, max_steps=q - 1)
        ok &= trace.k_max == q - 1
        for k in range(1, q):
            snap = trace.snapshot(k)
            ok &= len(snap) == q * q + k * q + 1 and pairwise_skew(snap, q)
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    criterion("C4 guaranteed sizes", ok, f"in {elapsed:.1f}s")
    assert ok


def _mandatory_checks(cert):
    return all(cert.checks[k] is True for k in ("off_hyperplane", "removal", "coverage", "skew", "size"))


def test_c5_published_results_small(criterion):
    start = time.perf_counter()
    ok = True
    for q, size in ((3, 22), (5, 81), (7, 183)):
        cert = certify(load_results(shipped_results_path(q)), maximality="full")
        ok &= cert.ok and cert.size == size and _mandatory_checks(cert) and cert.checks["maximal"] is True
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 300
    criterion("C5a certify q=3,5,7", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c5_published_results_large(criterion):
    start = time.perf_counter()
    ok = True
    for q, size in ((11, 628), (13, 976)):
        cert = certify(load_results(shipped_results_path(q)), maximality="skip")
        ok &= cert.ok and cert.size == size and _mandatory_checks(cert)
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 600
    criterion("C5b certify q=11,13", ok, f"maximality via --deep; in {elapsed:.1f}s")
    assert ok


@pytest.mark.deep
def test_c5_published_results_large_maximality(criterion):
    start = time.perf_counter()
    ok = True
    for q in (11, 13):
        cert = certify(load_results(shipped_results_path(q)), maximality="full")
        ok &= cert.ok and cert.checks["maximal"] is True
    elapsed = time.perf_counter() - start
    criterion("C5c maximality q=11,13", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c6_pg42_cardinalities(criterion):
    start = time.perf_counter()
    ok = bool(is_maximal(starting_spread(2))) and len(starting_spread(2)) == 5
    trace = run_search(2)
    seen_8 = False
    for _, _, serials in trace.intermediate_sets():
        s = PartialSpread(2, serials)
        res = is_maximal(s)
        ok &= res == is_maximal_full_scan(s)
        if res.maximal:
            ok &= len(serials) in (5, 7, 9)
        if len(serials) == 8:
            seen_8 = True
            ok &= not res.maximal and res.witness is not None
            ok &= pairwise_skew(serials + [res.witness], 2)
    final = PartialSpread(2, trace.final_serials())
    ok &= bool(is_maximal(final)) and len(final) in (7, 9) and seen_8
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 10
    criterion("C6 PG(4,2) sizes 5/7/9", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c7_oracle_equivalence(criterion):
    start = time.perf_counter()
    ok = True
    q = 2
    table = line_table(q)
    pts = [set(row) for row in line_points_many(table, q).tolist()]
    rows = table.tolist()
    for i, j in itertools.product(range(len(rows)), repeat=2):
        ok &= lines_meet(rows[i], rows[j], q) == bool(pts[i] & pts[j])
    q = 3
    table = line_table(q)
    pts = line_points_many(table, q)
    rows = table.tolist()
    rng = np.random.default_rng(0)
    a = rng.integers(0, len(rows), size=10**6)
    b = rng.integers(0, len(rows), size=10**6)
    shared = (pts[a][:, :, None] == pts[b][:, None, :]).any(axis=(1, 2))
    ok &= all(lines_meet(rows[i], rows[j], q) == s for i, j, s in zip(a.tolist(), b.tolist(), shared.tolist()))
    for q in (2, 3, 5, 7):
        ok &= bool((encode_many(line_table(q), q) == np.arange(line_count(q))).all())
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    criterion("C7 oracle equivalence", ok, f"in {elapsed:.1f}s")
    assert ok


def test_c8_mutation_detection(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    ok = True
    missed = []
    for q in (3, 5):
        rs = load_results(shipped_results_path(q))
        for _ in range(100):
            i = int(rng.integers(len(rs.pairs)))
            n = int(rng.integers(line_count(q) - 1))
            t, old = rs.pairs[i]
            n += n >= old
            pairs = list(rs.pairs)
            pairs[i] = (t, n)
            text = "t,n\n" + "".join(f"{a},{b}\n" for a, b in pairs)
            cert = certify(parse_results(text, q))
            if cert.ok:
                missed.append((q, i, old, n))
    ok &= not missed
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    criterion("C8 mutation detection", ok, f"200 mutations, {len(missed)} undetected, in {elapsed:.1f}s")
    assert ok, missed
