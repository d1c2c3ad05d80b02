"""Command-line entry point: ``pgspread <subcommand> --q Q ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import selftest
from .certify import SERIAL_CONVENTIONS, certify, load_results, shipped_results_path, verify_checksums
from .errors import GeometryError
from .field import is_prime
from .incidence import lines_meet, points_of_line
from .lines import (TYPE_GROUPS, decode, encode, format_line, gaussian_binomial_lines,
                    group_sizes, line_table)
from .pg3 import build_spread, embed_in_pg4, has_spread_table, validate_spread
from .search import run_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _check_q(args) -> int:
    q = args.q
    if not is_prime(q):
        raise UsageError(f"q={q} is not prime")
    if q > args.q_ceiling:
        raise UsageError(f"q={q} exceeds the configured ceiling {args.q_ceiling} "
                         f"(raise it with --q-ceiling; memory grows like q^6)")
    return q


def _writer(args, default_stdout=True):
    if args.out is None:
        if not default_stdout:
            raise UsageError(f"--out is required for --format {args.format}")
        return sys.stdout, False
    return open(args.out, "w", newline="\n"), True


def _emit(args, text: str) -> None:
    fh, close = _writer(args, default_stdout=args.format == "text")
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def cmd_enumerate(args) -> int:
    q = _check_q(args)
    table = line_table(q)
    fh, close = _writer(args)
    try:
        for n, row in enumerate(table):
            fh.write(f"{n}: " + " ".join(map(str, row)) + "\n")
        for group, size in zip(TYPE_GROUPS, group_sizes(q)):
            fh.write(f"# group {group.tag}={size}\n")
        fh.write(f"total={len(table)}\n")
    finally:
        if close:
            fh.close()
    if len(table) != gaussian_binomial_lines(q):
        print(f"line count {len(table)} != {gaussian_binomial_lines(q)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_decode(args) -> int:
    q = _check_q(args)
    _emit(args, "".join(format_line(n, decode(n, q)) + "\n" for n in args.serials))
    return EXIT_OK


def cmd_meet(args) -> int:
    q = _check_q(args)
    a, b = decode(args.a, q), decode(args.b, q)
    _emit(args, f"{str(lines_meet(a, b)).lower()}\n")
    return EXIT_OK


def cmd_points(args) -> int:
    q = _check_q(args)
    out = [f"{p.rank}: " + " ".join(map(str, p.coords)) for p in points_of_line(decode(args.serial, q))]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_spread(args) -> int:
    q = _check_q(args)
    lines = build_spread(q)
    source = "table" if has_spread_table(q) else "backtracking"
    out = [f"# q={q} source={source}"]
    for l in lines:
        out.append(f"{encode(embed_in_pg4(l))}: " + " ".join(map(str, l.coords)))
    problems = validate_spread(lines, q)
    out.append(f"lines={len(lines)} valid={'true' if not problems else 'false'}")
    out += [f"problem: {p}" for p in problems]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_search(args) -> int:
    q = _check_q(args)
    trace = run_search(q, max_steps=args.max_steps)
    if args.format == "csv":
        if args.out is None:
            raise UsageError("--out is required for --format csv")
        Path(args.out).write_text(trace.to_csv(), newline="\n")
        Path(args.out).with_suffix(".json").write_text(trace.to_json(), newline="\n")
    elif args.format == "json":
        _emit(args, trace.to_json())
    else:
        lines = [f"q={q} k_max_reached={trace.k_max}"]
        lines += [f"t={s.t} size={s.size_after} added={','.join(map(str, s.added_serials))}"
                  for s in trace.steps]
        lines += [f"failure: step {f.t} stuck at {f.stuck_point} after {len(f.partial)} line(s)"
                  for f in trace.failures]
        _emit(args, "\n".join(lines) + "\n")
    needed = q - 1 if args.max_steps is None else min(q - 1, args.max_steps)
    return EXIT_OK if trace.k_max >= needed else EXIT_FAIL


def cmd_certify(args) -> int:
    q = _check_q(args)
    path = Path(args.data) if args.data else shipped_results_path(q)
    if not path.exists():
        raise UsageError(f"no result file for q={q} at {path}")
    rs = load_results(path, q, convention=args.serials)
    upto = rs.k_max if args.max_steps is None else min(args.max_steps, rs.k_max)
    if q <= 7 or args.deep:
        mode = "full"
    else:
        mode = "skip"
    cert = certify(rs, upto, maximality=mode, threads=args.threads)
    if args.format == "json":
        _emit(args, cert.to_json())
    else:
        text = cert.to_text()
        if args.data is None:
            bad = verify_checksums([path.name])
            text += f"  provenance      {'ok' if not bad else 'CHANGED: ' + ', '.join(bad)}\n"
        _emit(args, text)
    return EXIT_OK if cert.ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    if args.q_max > args.q_ceiling:
        raise UsageError(f"--q-max {args.q_max} exceeds ceiling {args.q_ceiling}")
    results = selftest.run(args.q_max, seed=args.seed)
    out = [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in results]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=3, help="field order (prime)")
    common.add_argument("--q-ceiling", type=int, default=13)
    common.add_argument("--out", help="output path (default stdout for text)")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pgspread", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="dump all lines of PG(4,q)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("decode", parents=[common], help="Plücker coordinates of serials")
    s.add_argument("serials", type=int, nargs="+")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("meet", parents=[common], help="do two lines meet")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.set_defaults(func=cmd_meet)

    s = sub.add_parser("points", parents=[common], help="points of a line")
    s.add_argument("serial", type=int)
    s.set_defaults(func=cmd_points)

    s = sub.add_parser("spread", parents=[common], help="starting spread of x4=0")
    s.set_defaults(func=cmd_spread)

    s = sub.add_parser("search", parents=[common], help="greedy q-added construction")
    s.add_argument("--max-steps", type=_steps, default=None, help="integer or 'all'")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("certify", parents=[common], help="certify a t,n result file")
    s.add_argument("--max-steps", type=_steps, default=None, help="integer or 'all'")
    s.add_argument("--deep", action="store_true", help="maximality check for q >= 11")
    s.add_argument("--serials", choices=SERIAL_CONVENTIONS, default="published")
    s.add_argument("--data", help="result CSV (default: shipped file for q)")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("selftest", parents=[common], help="invariant battery")
    s.add_argument("--q-max", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def _steps(value: str):
    if value == "all":
        return None
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'all', got {value!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("step count must be >= 0")
    return n


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="# %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pgspread: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, ValueError) as exc:
        print(f"pgspread: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pgspread: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
