"""Command line front end: search, brute, verify-table, families, stats, candidate."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from hallsearch.candidates import SearchCell, build_candidates, lift_k0, select_n, solve_a0
from hallsearch.evaluator import make_hit
from hallsearch.exact_arith import hall_k, ratio_decimal
from hallsearch.families import fermat_pell_scan, hall_family, scale_solution
from hallsearch.modular import balanced_residue
from hallsearch.oracle import LARGE_SCAN, brute_scan
from hallsearch.records import write_hits
from hallsearch.search import PRESETS, ConfigError, SearchConfig, run
from hallsearch.stats import analyze
from hallsearch.table import load_table, render_report, verify_table

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_IO = 3

log = logging.getLogger("hallsearch")


def _integer(text: str) -> int:
    # accepts 1.2e8 style bounds; must still be integral
    value = Decimal(text)
    if value != value.to_integral_value():
        raise ValueError(text)
    return int(value)


def int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return _integer(lo), _integer(hi)
    except (ValueError, ArithmeticError):
        raise argparse.ArgumentTypeError(f"expected integers LO:HI, got {text!r}") from None


def rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/3, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _emit(hits, out: Path | None, fmt: str):
    if out is None:
        write_hits(hits, sys.stdout, fmt)
    else:
        with open(out, "w") as fh:
            write_hits(hits, fh, fmt)


def cmd_search(args) -> int:
    preset = PRESETS.get(args.preset, {}) if args.preset else {}
    if args.b is not None:
        b_lo, b_hi = args.b
    else:
        b_lo, b_hi = 2, preset.get("b_hi", 2000)
    config = SearchConfig(
        b_lo=b_lo, b_hi=b_hi,
        u=args.u if args.u is not None else preset.get("u", Fraction(1, 3)),
        c2_cap_override=args.c2_max, theta=args.theta, log_theta=args.log_theta,
        wn=args.wn, wi=args.wi, shards=args.shards, chunk=args.chunk,
        checkpoint_path=args.checkpoint, output_path=args.out, fmt=args.format,
    )
    result = run(config, max_chunks=args.max_chunks)
    if args.out is None:
        write_hits(result.hits, sys.stdout, args.format)
    c = result.checkpoint.counts
    print(f"# cells={c['cells']} candidates={c['candidates']} lift_failed={c['lift_failed']} "
          f"hits={c['hits']} duplicates={c['duplicates']} complete={result.complete}",
          file=sys.stderr)
    return EXIT_OK


def cmd_brute(args) -> int:
    lo, hi = args.x
    samples, hits = brute_scan(lo, hi, args.n_max, workers=args.workers, allow_large=args.allow_large)
    _emit(hits, args.out, args.format)
    if args.samples is not None:
        with open(args.samples, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "k", "ratio"])
            for s in samples:
                w.writerow([s.x, s.k, s.decimal(6)])
    print(f"# samples={len(samples)} hits={len(hits)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify_table(args) -> int:
    checks = verify_table()
    print(render_report(checks))
    return EXIT_OK if all(c.ok for c in checks) else EXIT_VERIFY


def cmd_families(args) -> int:
    hits = []
    if args.family == "hall":
        for t in args.t:
            m = hall_family(t)
            hits.append(make_hit(m.point, "family-hall"))
    elif args.family == "fermat-pell":
        lo, hi = args.t_range
        for m in fermat_pell_scan(lo, hi, args.theta):
            hits.append(make_hit(m.point, "family-fp"))
    else:
        rows = {r.index: r for r in load_table()}
        if args.row not in rows:
            raise ConfigError(f"no table row {args.row}")
        pt = scale_solution(hall_k(rows[args.row].x), args.factor)
        hits.append(make_hit(pt, "scaled"))
    _emit(hits, args.out, args.format)
    return EXIT_OK


def _read_sample_csv(path: Path) -> tuple[list[float], int]:
    ratios, x_max = [], 2
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            ratios.append(float(rec["ratio"]))
            x_max = max(x_max, int(rec["x"]))
    return ratios, x_max


def cmd_stats(args) -> int:
    if args.samples is not None:
        ratios, X = _read_sample_csv(args.samples)
    else:
        lo, hi = args.x
        samples, _ = brute_scan(lo, hi, args.n_max, workers=args.workers)
        ratios, X = [s.decimal(6) for s in samples], hi
    if not ratios:
        print("no samples", file=sys.stderr)
        return EXIT_VERIFY
    print(analyze(ratios, args.n_max, X).render())
    return EXIT_OK


def cmd_candidate(args) -> int:
    cell = SearchCell(args.b, args.c2)
    b = cell.b
    roots = solve_a0(cell)
    print(f"cell b={b} C2={cell.C2} (C={cell.C})")
    print(f"a0 roots mod b^2={b * b}: {roots}")
    for a0 in roots:
        alpha = balanced_residue(a0 * a0, b * b)
        lift = lift_k0(b, a0, alpha, cell.C2)
        if lift is None:
            print(f"  a0={a0} alpha={alpha} no-lift")
            continue
        d, k0 = lift
        n = select_n(b, cell.C2, alpha, a0, k0, d)
        print(f"  a0={a0} alpha={alpha} d={d} k0={k0} n={n}")
    for cand in build_candidates(cell, args.wn):
        print(f"    a={cand.a} n={cand.n} x0={cand.x0}")
        for i in range(-args.wi, args.wi + 1):
            x = cand.x0 + i
            if x < 2:
                continue
            pt = hall_k(x)
            r = ratio_decimal(x, pt.k) if pt.k else "inf"
            print(f"      i={i:+d} x={x} y={pt.y} k={pt.k} r={r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hallsearch", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="sweep (b, C) cells")
    s.add_argument("--b", type=int_range, help="b range LO:HI")
    s.add_argument("--u", type=rational, help="C cap exponent, C <= b^u")
    s.add_argument("--c2-max", type=int, dest="c2_max", help="override the C2 = 2C cap")
    s.add_argument("--theta", type=rational, default=Fraction(1), help="report sqrt(x)/|k| >= theta")
    s.add_argument("--log-theta", type=rational, dest="log_theta", help="log near misses above this")
    s.add_argument("--wn", type=int, default=1, help="n window")
    s.add_argument("--wi", type=int, default=2, help="x window around x0")
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--chunk", type=int, default=64, help="b values per work unit")
    s.add_argument("--checkpoint", type=Path)
    s.add_argument("--out", type=Path)
    s.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--max-chunks", type=int, dest="max_chunks", help="stop after this many chunks")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("brute", help="exhaustive scan of x")
    s.add_argument("--x", type=int_range, default=(2, 10 ** 6), help="x range LO:HI")
    s.add_argument("--n-max", type=int, default=1, dest="n_max")
    s.add_argument("--samples", type=Path, help="write (x, k, ratio) CSV")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--allow-large", action="store_true", dest="allow_large",
                   help=f"permit x beyond {LARGE_SCAN}")
    s.add_argument("--out", type=Path)
    s.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    s.set_defaults(func=cmd_brute)

    s = sub.add_parser("verify-table", help="recompute the bundled table of known examples")
    s.set_defaults(func=cmd_verify_table)

    s = sub.add_parser("families", help="parametric families")
    fam = s.add_subparsers(dest="family", required=True)
    f = fam.add_parser("hall")
    f.add_argument("-t", type=int, nargs="+", default=[-3, 3, -9, 9])
    f = fam.add_parser("fermat-pell")
    f.add_argument("--t", type=int_range, dest="t_range", default=(-100, 100))
    f.add_argument("--theta", type=rational, default=Fraction(1))
    f = fam.add_parser("scale")
    f.add_argument("--row", type=int, default=20)
    f.add_argument("--factor", type=int, default=2)
    for f in fam.choices.values():
        f.add_argument("--out", type=Path)
        f.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    s.set_defaults(func=cmd_families)

    s = sub.add_parser("stats", help="distribution of |k|/sqrt(x)")
    s.add_argument("--x", type=int_range, default=(2, 10 ** 6))
    s.add_argument("--n-max", type=int, default=16, dest="n_max")
    s.add_argument("--samples", type=Path, help="read a CSV written by brute --samples")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("candidate", help="print the pipeline trace for one cell")
    s.add_argument("b", type=int)
    s.add_argument("c2", type=int, help="C2 = 2C")
    s.add_argument("--wn", type=int, default=0)
    s.add_argument("--wi", type=int, default=0)
    s.set_defaults(func=cmd_candidate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
