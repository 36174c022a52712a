"""Command-line interface.

Exit codes: 0 when everything verified or matched, 1 when a mathematical
mismatch was found, 2 for usage or input-format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import format_rat
from .engine import (
    CACHE_FILENAME,
    DEFAULT_DEPTH,
    CacheFormatError,
    SequenceKind,
    TableDepthError,
    build_euler_table,
    cache_load,
    cache_store,
    euler_poly,
    sequence_values,
)
from .identities import (
    DEFAULT_LAMBDAS,
    Grid,
    IdentityId,
    IdentityParams,
    ParameterError,
    ProbeId,
    grid_verify,
    parse_lambda,
    residual_probe,
)
from .oeis import SUPPORTED, BFileError, bundled_bfile, compare, parse_bfile

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _table(args, need: int):
    if getattr(args, "table", None):
        try:
            table = cache_load(args.table)
        except OSError as exc:
            raise UsageError(f"cannot read table: {exc}") from None
        except CacheFormatError as exc:
            raise UsageError(str(exc)) from None
        try:
            table.require(need)
        except TableDepthError as exc:
            raise UsageError(str(exc)) from None
        return table
    return build_euler_table(max(DEFAULT_DEPTH, need))


# ----------------------------------------------------------------- commands


def cmd_poly(args) -> int:
    table = _table(args, args.n)
    p = euler_poly(args.n, table)
    if args.alpha is not None:
        p = p.specialize_alpha(args.alpha)
    if args.format == "latex":
        text = p.to_latex()
    elif args.format == "json":
        text = json.dumps({
            "n": args.n,
            "alpha": "a" if args.alpha is None else format_rat(args.alpha),
            "text": str(p),
            "coeffs": [[format_rat(v) for v in c.coeffs] for c in p.coeffs],
        })
    else:
        text = str(p)
    print(text)
    return EXIT_OK


def cmd_numbers(args) -> int:
    if args.upto < 1:
        raise UsageError("--upto must be >= 1")
    kind = SequenceKind(args.kind)
    if kind is SequenceKind.EULER_NUMBER:
        count = args.upto + 1
        rows = list(zip(range(count), sequence_values(kind, count, _table(args, count - 1))))
        sym = "E"
    else:
        rows = list(zip(range(1, args.upto + 1), sequence_values(kind, args.upto, _table(args, args.upto - 1))))
        sym = "G"
    if args.format == "json":
        print(json.dumps([{"n": n, "value": format_rat(v)} for n, v in rows]))
    elif args.format == "latex":
        for n, v in rows:
            print(f"{sym}_{{{n}}} = {format_rat(v)} \\\\")
    else:
        for n, v in rows:
            print(f"{n} {format_rat(v)}")
    return EXIT_OK


def _parse_ids(text: str) -> list:
    tags = [t for t in text.split(",") if t.strip()]
    if not tags:
        raise UsageError("no identity given")
    if any(t.strip().lower() == "all" for t in tags):
        return list(IdentityId)
    try:
        return [IdentityId.parse(t) for t in tags]
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def _parse_lambdas(text: str) -> tuple:
    vals = tuple(v.strip() for v in text.split(",") if v.strip())
    if not vals:
        raise UsageError("empty --lambda list")
    for v in vals:
        try:
            parse_lambda(v)
        except ParameterError as exc:
            raise UsageError(str(exc)) from None
    return vals


def cmd_verify(args) -> int:
    ids = _parse_ids(args.identity)
    grid = Grid.uniform(args.max, _parse_lambdas(args.lam))
    table = _table(args, 0)
    result = grid_verify(ids, grid, table, skip_invalid=True, jobs=args.jobs)
    if args.out:
        Path(args.out).write_text(result.to_json() + "\n", encoding="utf-8")
    for name, counts in result.summary().items():
        print(f"{name}: {counts['holds']} holds, {counts['fails']} fails")
    tot = result.totals()
    print(f"total: {tot['holds']} holds, {tot['fails']} fails")
    for rep in result.reports:
        if rep.status.value == "fails":
            print(f"first failure: {rep.identity.name} {rep.params.to_dict()}")
            break
    return EXIT_OK if result.all_hold else EXIT_MISMATCH


def cmd_probe(args) -> int:
    try:
        probe = ProbeId.parse(args.identity)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    table = _table(args, 0)
    top = range(args.max + 1)
    found = []
    if probe is ProbeId.EQ_R3:
        points = [IdentityParams(n=n, l=l) for n in top for l in top]
    elif probe is ProbeId.EQ_7_AS_PRINTED:
        points = [IdentityParams(n=n, lam=v) for n in top for v in DEFAULT_LAMBDAS]
    else:
        points = [IdentityParams(n=n, l=n, r=0, extra={"m": m, "q": q, "k": k})
                  for n in top for m in top for q in top for k in top]
    for p in points:
        try:
            rep = residual_probe(probe, p, table)
        except ParameterError:
            continue
        found.append(rep)
        print(rep.describe())
    if args.out:
        Path(args.out).write_text(json.dumps([r.to_dict() for r in found], indent=1) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_oeis(args) -> int:
    if args.seq not in SUPPORTED:
        raise UsageError(f"unsupported sequence {args.seq}; choose from {', '.join(SUPPORTED)}")
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    path = args.bfile or bundled_bfile(args.seq)
    try:
        bfile = parse_bfile(path, args.seq)
    except (OSError, BFileError) as exc:
        raise UsageError(str(exc)) from None
    if not bfile.entries:
        print(f"{args.seq}: no data in {path}")
        return EXIT_MISMATCH
    table = _table(args, 2 * args.count)
    cmp = compare(bfile, args.count, table)
    print(f"{'n':>4} {'computed':>24} {'b-file':>24}")
    for idx, got, want in cmp.rows:
        shown = "-" if want is None else str(want)
        mark = "" if got == want else "  <-- mismatch"
        print(f"{idx:>4} {got:>24} {shown:>24}{mark}")
    if cmp.ok:
        print(f"{args.seq}: {len(cmp.rows)} terms match")
        return EXIT_OK
    print(f"{args.seq}: first difference at index {cmp.first_mismatch}")
    return EXIT_MISMATCH


def cmd_cache(args) -> int:
    out_dir = Path(args.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = cache_store(build_euler_table(args.build), out_dir / CACHE_FILENAME)
    print(path)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulerkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    table_opt = argparse.ArgumentParser(add_help=False)
    table_opt.add_argument("--table", help="load coefficients from a cache file instead of building them")

    p = sub.add_parser("poly", parents=[table_opt], help="print E_n^(a)(x)")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--alpha", type=_rational, help="rational order; symbolic 'a' when omitted")
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("numbers", parents=[table_opt], help="Euler or Genocchi numbers")
    p.add_argument("--kind", choices=("euler", "genocchi"), required=True)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    p.set_defaults(func=cmd_numbers)

    p = sub.add_parser("verify", parents=[table_opt], help="verify identities over a parameter grid")
    p.add_argument("--identity", default="all", help="comma-separated tags, or 'all'")
    p.add_argument("--max", type=_nonneg, default=5, help="upper bound of every integer parameter")
    p.add_argument("--lambda", dest="lam", default=",".join(DEFAULT_LAMBDAS))
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", parents=[table_opt], help="diagnose suspect closed forms")
    p.add_argument("--identity", required=True, help=", ".join(x.value for x in ProbeId))
    p.add_argument("--max", type=_nonneg, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("oeis", parents=[table_opt], help="cross-check against an OEIS b-file")
    p.add_argument("--seq", required=True)
    p.add_argument("--bfile", help="b-file path; the bundled fixture when omitted")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_oeis)

    p = sub.add_parser("cache", help="build and store a coefficient table")
    p.add_argument("--build", type=_nonneg, required=True, metavar="N")
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eulerkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
