"""Command-line front end: ``msrsearch {search,verify,systematic,rate,merge}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .codefile import (
    EXPLICIT,
    SYMMETRIC,
    CodeDocument,
    format_report,
    load,
    parse_report,
    serialize,
    serialize_many,
)
from .conditions import verify
from .errors import MSRError, ParseError, Singular
from .galois import make_field
from .model import CodeParameters, rates, seed_to_systematic, to_systematic
from .search import EXHAUSTIVE, RANDOM, SearchConfig, merge_reports, run_search, shard

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _shard_spec(text: str) -> tuple[int, int]:
    try:
        i, n = text.split("/")
        i, n = int(i), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like i/N, got {text!r}") from None
    if n < 1 or not 1 <= i <= n:
        raise argparse.ArgumentTypeError(f"shard {text!r} needs 1 <= i <= N")
    return i, n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msrsearch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="search for rotationally symmetric codes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=int, required=True, help="field characteristic")
    s.add_argument("--m", type=int, default=1, help="field extension degree")
    s.add_argument("--mode", choices=[EXHAUSTIVE, RANDOM], default=EXHAUSTIVE)
    s.add_argument("--seed", type=int, help="RNG seed (random mode)")
    s.add_argument("--samples", type=int, default=1000, help="A matrices drawn in random mode")
    s.add_argument("--limit", type=int, default=10, help="max codes written (0 = all)")
    s.add_argument("--stop-after", type=int, default=0, help="stop after this many codes (0 = never)")
    s.add_argument("--shard", type=_shard_spec, help="run only shard i of N (1-based), e.g. 2/8")
    s.add_argument("--jobs", type=int, default=1, help="run the search as this many shards in parallel")
    s.add_argument("--general-position", action="store_true", help="only accept codes in general position")
    s.add_argument("--out", type=Path, help="write emitted codes here")
    s.add_argument("--with-codes", action="store_true", help="append code sections to the report")

    v = sub.add_parser("verify", help="check independence and repair of code files")
    v.add_argument("path", type=Path)
    v.add_argument("--general-position", action="store_true",
                   help="also report general position (does not affect the exit code)")

    t = sub.add_parser("systematic", help="column-transform a code into systematic form")
    t.add_argument("path", type=Path)
    t.add_argument("out", type=Path)

    r = sub.add_parser("rate", help="repair bandwidth of naive, cut-set and alignment schemes")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--M", type=Fraction, default=Fraction(1))

    m = sub.add_parser("merge", help="merge report files from sharded runs")
    m.add_argument("reports", type=Path, nargs="+")
    return parser


def cmd_search(args) -> int:
    try:
        params = CodeParameters(args.n, args.k)
        field = make_field(args.p, args.m)
        config = SearchConfig(
            params, field, mode=args.mode, seed=args.seed, limit=args.limit,
            require_general_position=args.general_position, samples=args.samples,
            stop_after=args.stop_after,
        )
        if args.shard is not None:
            i, parts = args.shard
            config = shard(config, parts)[i - 1]
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if args.jobs > 1 and config.mode != EXHAUSTIVE:
            raise UsageError("--jobs needs exhaustive mode")
    except (MSRError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.jobs > 1:
        pieces = shard(config, args.jobs)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            report = merge_reports(list(pool.map(run_search, pieces)))
        if config.limit:
            del report.emitted[config.limit:]
    else:
        report = run_search(config)

    sys.stdout.write(format_report(report, config.bounds if config.mode == EXHAUSTIVE else None,
                                   include_codes=args.with_codes))
    if args.out is not None and report.emitted:
        args.out.write_text(serialize_many(report.emitted), encoding="utf-8")
    return EXIT_OK


def _load_or_fail(path: Path) -> list[CodeDocument]:
    try:
        return load(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def cmd_verify(args) -> int:
    try:
        docs = _load_or_fail(args.path)
    except ParseError as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    all_ok = True
    for idx, doc in enumerate(docs, 1):
        if len(docs) > 1:
            print(f"code {idx}")
        code = doc.to_code()
        verdict = verify(code, general_position=args.general_position)
        print(verdict.render(code.params.n))
        all_ok &= verdict.ok
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_systematic(args) -> int:
    try:
        docs = _load_or_fail(args.path)
    except ParseError as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_docs = []
    for doc in docs:
        verdict = verify(doc.to_code())
        if not verdict.ok:
            print("error: input does not verify:", file=sys.stderr)
            print(verdict.render(doc.params.n), file=sys.stderr)
            return EXIT_FAIL
        try:
            if doc.form == SYMMETRIC:
                new_seed, t = seed_to_systematic(doc.to_seed())
                out_docs.append(CodeDocument.from_seed(new_seed))
            else:
                new_code, t = to_systematic(doc.to_code())
                out_docs.append(CodeDocument.from_code(new_code))
        except Singular:  # pragma: no cover - verify() already rejects these
            print("error: first k storage matrices are singular", file=sys.stderr)
            return EXIT_FAIL
        print(f"matrix T {t.nrows} {t.ncols}")
        print(t)
    args.out.write_text(serialize_many(out_docs), encoding="utf-8")
    return EXIT_OK


def cmd_rate(args) -> int:
    try:
        r = rates(args.n, args.k, args.M)
    except MSRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"n={r.n} k={r.k} M={r.M}")
    print(f"gamma_naive={r.gamma_naive}")
    print(f"gamma_msr={r.gamma_msr}")
    print(f"gamma_ia={r.gamma_ia}")
    print(f"subpacket_size={r.subpacket_size}")
    print(f"equal={'yes' if r.equal else 'no'}")
    return EXIT_OK


def cmd_merge(args) -> int:
    try:
        reports = [parse_report(p.read_text(encoding="utf-8")) for p in args.reports]
        merged = merge_reports(reports)
    except (MSRError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(format_report(merged, include_codes=bool(merged.emitted)))
    return EXIT_OK


COMMANDS = {
    "search": cmd_search,
    "verify": cmd_verify,
    "systematic": cmd_systematic,
    "rate": cmd_rate,
    "merge": cmd_merge,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    return COMMANDS[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
