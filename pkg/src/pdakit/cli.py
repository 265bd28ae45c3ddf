"""Command-line entry point.

Exit status: 0 on success, 1 when a PDA file is malformed or invalid or a
user fails to decode, 2 on bad usage (unknown flags, out-of-range
parameters, unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .bounds import bound_report
from .caching import (
    DecodeFailure,
    FileLibrary,
    SweepTooLarge,
    demand_sweep,
    simulate,
)
from .comparisons import (
    TABLES,
    NoMatchingParameters,
    build_table,
    compare_p1_vs_mn,
    compare_p1_vs_shang,
    compare_p1_vs_yan,
    compare_p2_vs_grouped,
    compare_p2_vs_mn,
)
from .constructions import VARIANT_PERMUTATIONS, build_grouped_mn, build_mn, build_p1, build_p2, build_variant
from .oracle import DEFAULT_MAX_CELLS, find_pda, oracle_min_s
from .pda import MalformedGrid, Pda, PdaError, PdaFormatError, format_text, parse_text, validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    """The input parsed as a command but is not a well-formed PDA file."""


def _read_pda(path: str) -> Pda:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_text(text)
    except (PdaFormatError, MalformedGrid) as exc:
        raise InvalidInput(str(exc)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_construct(args) -> int:
    if args.family == "mn":
        p = build_mn((args.k, args.t))
    elif args.family == "grouped":
        p = build_grouped_mn(args.k, args.t, args.m)
    elif args.family == "variant":
        p = build_variant((args.k, args.t), args.which)
    elif args.family == "p1":
        p = build_p1(args.k, args.t)
    else:
        p = build_p2(args.k, args.t)
    _emit(format_text(p), args.out)
    if args.summary:
        print(validate(p).summary(), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _read_pda(args.file)
    verdict = validate(p)
    if not verdict.ok:
        print(verdict.summary())
        payload = {"ok": False, "violations": [v.to_dict() for v in verdict.violations]}
        print(json.dumps(payload), file=sys.stderr)
        return EXIT_INVALID
    print(verdict.summary())
    return EXIT_OK


def cmd_bounds(args) -> int:
    report = bound_report(args.K, args.F, args.Z, args.achievable)
    sys.stdout.write(report.to_csv() if args.csv else report.to_text())
    return EXIT_OK


def cmd_oracle(args) -> int:
    S = oracle_min_s(
        args.K, args.F, args.Z, args.smax, max_cells=args.max_cells, start=args.start
    )
    print(f"min S = {S} for (K={args.K},F={args.F},Z={args.Z})")
    if args.witness and S > 0:
        sys.stdout.write(format_text(find_pda(args.K, args.F, args.Z, S, max_cells=args.max_cells)))
    return EXIT_OK


def _parse_demand(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad demand list {text!r}") from None


def cmd_simulate(args) -> int:
    p = _read_pda(args.pda)
    verdict = validate(p)
    if not verdict.ok:
        payload = {"ok": False, "violations": [v.to_dict() for v in verdict.violations]}
        print(json.dumps(payload), file=sys.stderr)
        return EXIT_INVALID
    if args.sweep is not None:
        mode = args.sweep
        if mode == "exhaustive":
            sampled = None
        elif mode.startswith("sampled:") and mode[8:].isdigit():
            sampled = int(mode[8:])
        else:
            raise UsageError(f"bad sweep mode {mode!r}; use exhaustive or sampled:COUNT")
        try:
            summary = demand_sweep(
                p, args.files, sampled=sampled, seed=args.seed,
                block_size=args.block_size, max_demands=args.max_demands,
                workers=args.workers,
            )
        except SweepTooLarge as exc:
            raise UsageError(str(exc)) from None
        print(
            f"{summary.mode}: {summary.demands_checked} demands, "
            f"{len(summary.failures)} failures, rate {summary.rate}"
        )
        if not summary.ok:
            fails = [
                {"demand": list(d), "user": k, "packet": j}
                for d, k, j in summary.failures[:20]
            ]
            print(json.dumps({"ok": False, "failures": fails}), file=sys.stderr)
            return EXIT_INVALID
        return EXIT_OK

    if args.demand is not None:
        demand = _parse_demand(args.demand)
    else:
        demand = [k % args.files for k in range(p.num_cols)]
    lib = FileLibrary.random(args.files, p.num_rows, args.block_size, args.seed)
    try:
        transcript, _ = simulate(p, lib, demand)
    except DecodeFailure as exc:
        print(json.dumps({"ok": False, "user": exc.user, "packet": exc.packet, "error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    print(f"demand {','.join(map(str, transcript.demand))}")
    sys.stdout.write(transcript.to_table(payload=args.payload))
    print(f"all {p.num_cols} users decoded; rate {transcript.rate_achieved}")
    return EXIT_OK


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.pair} needs {' '.join(missing)}")


def cmd_compare(args) -> int:
    if args.pair == "p1-shang":
        _need(args, "k", "t", "m", "q", "l")
        row = compare_p1_vs_shang(args.k, args.t, args.m, args.q, args.l)
    else:
        _need(args, "k", "t")
        fn = {
            "p1-mn": compare_p1_vs_mn,
            "p2-mn": compare_p2_vs_mn,
            "p2-grouped": compare_p2_vs_grouped,
            "p1-yan": compare_p1_vs_yan,
        }[args.pair]
        try:
            row = fn(args.k, args.t)
        except NoMatchingParameters as exc:
            # a family without a matching member is an answer, not an error
            print(f"{args.pair}: no matching parameters ({exc})")
            return EXIT_OK
    sys.stdout.write(row.describe(args.digits))
    return EXIT_OK


def cmd_compare_table(args) -> int:
    sys.stdout.write(build_table(args.name).render(args.format, args.digits))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdakit", description="Placement delivery array toolkit"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a PDA and print it")
    c.add_argument("family", choices=["mn", "grouped", "variant", "p1", "p2"])
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--m", type=int, default=1, help="group count (grouped)")
    c.add_argument("--which", choices=sorted(VARIANT_PERMUTATIONS), default="a")
    c.add_argument("--out", help="write to FILE instead of stdout")
    c.add_argument("--summary", action="store_true", help="print parameters to stderr")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="validate a PDA file ('-' for stdin)")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="lower bounds on S")
    b.add_argument("K", type=int)
    b.add_argument("F", type=int)
    b.add_argument("Z", type=int)
    b.add_argument("--achievable", type=int, help="known achievable S to compare against")
    b.add_argument("--csv", action="store_true")
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="exhaustive minimum S for small sizes")
    o.add_argument("K", type=int)
    o.add_argument("F", type=int)
    o.add_argument("Z", type=int)
    o.add_argument("--smax", type=int)
    o.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    o.add_argument("--start", choices=["bounds", "trivial"], default="bounds")
    o.add_argument("--witness", action="store_true", help="also print an optimal PDA")
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("simulate", help="run a PDA as a coded caching scheme")
    s.add_argument("--pda", required=True)
    s.add_argument("--files", type=int, required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--demand", help="comma-separated file index per user")
    mode.add_argument("--sweep", help="exhaustive or sampled:COUNT")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--block-size", type=int, default=64)
    s.add_argument("--payload", action="store_true", help="print signal bytes in hex")
    s.add_argument("--max-demands", type=int, default=1 << 20)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    cp = sub.add_parser("compare", help="ratios between two families")
    cp.add_argument("pair", choices=["p1-mn", "p2-mn", "p2-grouped", "p1-yan", "p1-shang"])
    for name in ("k", "t", "m", "q", "l"):
        cp.add_argument(f"--{name}", type=int)
    cp.add_argument("--digits", type=int, default=6)
    cp.set_defaults(func=cmd_compare)

    ct = sub.add_parser("compare-table", help="regenerate a published comparison table")
    ct.add_argument("name", choices=sorted(TABLES))
    ct.add_argument("--format", choices=["text", "csv", "md"], default="text")
    ct.add_argument("--digits", type=int, help="override the published precision")
    ct.set_defaults(func=cmd_compare_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(json.dumps({"ok": False, "format_error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, PdaError) as exc:
        print(f"pdakit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
