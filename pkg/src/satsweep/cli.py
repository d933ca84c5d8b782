"""Command line front end: ``fraig``, ``check-equiv`` and ``stats``.

Exit codes: 0 success / equivalent, 1 circuits differ, 2 bad input (parse
error, arity mismatch, unusable engine), 3 I/O error, 4 undecided.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from .aig import Aig, AigerParseError, parse_aiger, write_aiger
from .backend import ENV_VAR
from .fraig import ArityMismatch, FraigConfig, MiterVerdict, miter_check, sweep
from .session import InitError

log = logging.getLogger("satsweep")

EXIT_OK = 0
EXIT_DIFFER = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3
EXIT_UNDECIDED = 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _limit(text: str) -> int | None:
    if text.lower() in ("none", "off", "inf"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("limit must be a natural number or 'none'")
    return value


def _load(path: str) -> Aig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from exc
    try:
        return parse_aiger(text)
    except AigerParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_BAD_INPUT) from exc


def _config(args: argparse.Namespace) -> FraigConfig:
    return FraigConfig(
        sim_words=args.sim_words,
        sim_rounds=args.sim_rounds,
        solve_limit=args.limit,
        rng_seed=args.seed,
        engine=args.engine,
    )


def cmd_fraig(args: argparse.Namespace) -> int:
    g = _load(args.input)
    result = sweep(g, _config(args))
    try:
        with open(args.output, "w") as fh:
            fh.write(write_aiger(result.graph))
    except OSError as exc:
        raise CliError(f"{args.output}: {exc.strerror or exc}", EXIT_IO) from exc
    for key, value in result.stats.as_dict().items():
        print(f"{key}={value}")
    return EXIT_OK


def cmd_check_equiv(args: argparse.Namespace) -> int:
    g1, g2 = _load(args.first), _load(args.second)
    try:
        result = miter_check(g1, g2, _config(args))
    except ArityMismatch as exc:
        raise CliError(str(exc), EXIT_BAD_INPUT) from exc
    if result.sweep is not None:
        log.info("sweep: %s", result.sweep.stats.as_dict())
    log.info("merged outputs: %d, miter conflicts: %d", result.merged_outputs, result.conflicts)
    print(result.verdict.name)
    if result.verdict is MiterVerdict.DIFFER:
        assert result.invals is not None and result.regvals is not None
        for k, bit in enumerate(result.invals):
            print(f"{g1.input_names[k] or k}={bit}")
        for k, bit in enumerate(result.regvals):
            print(f"{g1.reg_names[k] or f'r{k}'}={bit}")
        return EXIT_DIFFER
    if result.verdict is MiterVerdict.UNDECIDED:
        return EXIT_UNDECIDED
    return EXIT_OK


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def cmd_stats(args: argparse.Namespace) -> int:
    g = _load(args.input)
    print(
        ", ".join(
            [
                _plural(g.num_ands, "and"),
                _plural(g.num_inputs, "input"),
                _plural(g.num_outputs, "output"),
                _plural(g.num_regs, "register"),
            ]
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satsweep", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=_limit, default=1000, help="conflicts per SAT check, or 'none' (default 1000)")
    common.add_argument("--seed", type=int, default=0, help="simulation seed (default 0)")
    common.add_argument("--sim-words", type=int, default=4, help="64-bit words per simulation round (default 4)")
    common.add_argument("--sim-rounds", type=int, default=2, help="initial simulation rounds (default 2)")
    common.add_argument(
        "--engine",
        choices=("embedded", "external"),
        default="embedded",
        help=f"SAT engine; 'external' loads ${ENV_VAR}",
    )
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fraig", parents=[common], help="sweep an AIGER file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_fraig)

    p = sub.add_parser("check-equiv", parents=[common], help="combinational equivalence of two AIGER files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_check_equiv)

    p = sub.add_parser("stats", parents=[common], help="print graph size")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"satsweep: {exc}", file=sys.stderr)
        return exc.code
    except InitError as exc:
        print(f"satsweep: cannot start SAT engine: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"satsweep: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
