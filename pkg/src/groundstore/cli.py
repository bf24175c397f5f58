"""Command-line entry point: ``groundstore run|check|entail|laws``.

Exit codes: 0 ok / holds, 1 fails with a witness (or law violations),
2 input error, 3 unsupported (higher order), 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .frontend.parser import ParseError, parse_entailment_file, parse_formula_file, parse_program_file, parse_sort_decls
from .frontend.typecheck import TypeCheckError
from .hiding import Hidden
from .interpreter import merge_sorts, run_closed
from .logic.bounds import Bounds
from .logic.entail import check_at, check_context, check_valid, entails, load_env, load_heaplet
from .logic.laws import SUITES, check_laws
from .values import DEFAULT_SORTS, HigherOrderError, SortTable, TypeError_
from .worlds import WorldError

OK, FAILS, INPUT_ERROR, UNSUPPORTED, INTERNAL = 0, 1, 2, 3, 4


class InputError(Exception):
    """Unreadable file or inconsistent options."""


# ---------------------------------------------------------------- argument parsing


def _config_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--sorts", metavar="FILE", help="file of 'sort S = type;' declarations added to Int and RInt")
    g.add_argument("--max-extra-cells", type=int, metavar="N", help="fresh cells per quantifier step (default 2)")
    g.add_argument("--int-min", type=int, metavar="N", help="least int in the domain (default 0)")
    g.add_argument("--int-max", type=int, metavar="N", help="greatest int in the domain (default 7)")
    g.add_argument("--max-world", type=int, metavar="N", help="cell cap for enumerated worlds (default 3)")
    g.add_argument("--fills", choices=["monotone", "literal"], help="fill enumeration for fresh cells (default monotone)")
    g.add_argument("--format", choices=["text", "json"], default="text", help="output format")
    g.add_argument("--seed", type=int, default=0, help="seed for sampled law suites")
    g.add_argument("--naive-implication", action="store_true", help="diagnostic: plain Kripke clause for '->'")
    return common


def _source_args(p: argparse.ArgumentParser, what: str) -> None:
    p.add_argument("file", nargs="?", help=f"{what} file")
    p.add_argument("-e", "--expr", metavar="TEXT", help=f"{what} given inline instead of a file")


def build_parser() -> argparse.ArgumentParser:
    common = _config_parser()
    parser = argparse.ArgumentParser(
        prog="groundstore", description="Executable model of full ground store: programs, logic and law suites."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="evaluate a closed program and print its canonical result")
    _source_args(run, "program")

    check = sub.add_parser("check", parents=[common], help="check a formula for validity, or at one state")
    _source_args(check, "formula")
    check.add_argument("--heaplet", metavar="LIT", help="check at this heaplet, e.g. 'over {#0:Int} { #0 -> 5 }'")
    check.add_argument("--env", metavar="LIT", default="", help="values for the context, e.g. 'l = #0'")

    entail = sub.add_parser("entail", parents=[common], help="decide 'lhs |- rhs' within bounds")
    _source_args(entail, "entailment")

    laws = sub.add_parser("laws", parents=[common], help="run a law suite")
    laws.add_argument("suite", choices=SUITES)
    laws.add_argument("--no-ucl", action="store_true", help="bi suite on all subsets, not just upward-closed ones")
    return parser


# ---------------------------------------------------------------- helpers


def _bounds(args: argparse.Namespace) -> Bounds:
    defaults = Bounds()
    try:
        return _make_bounds(args, defaults)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _make_bounds(args: argparse.Namespace, defaults: Bounds) -> Bounds:
    return Bounds(
        max_extra_cells=defaults.max_extra_cells if args.max_extra_cells is None else args.max_extra_cells,
        int_min=defaults.int_min if args.int_min is None else args.int_min,
        int_max=defaults.int_max if args.int_max is None else args.int_max,
        max_world=defaults.max_world if args.max_world is None else args.max_world,
        fills=args.fills or defaults.fills,
        naive_implication=args.naive_implication,
    )


def _read(args: argparse.Namespace) -> str:
    if (args.file is None) == (args.expr is None):
        raise InputError("give exactly one of a file or --expr")
    if args.expr is not None:
        return args.expr
    try:
        return Path(args.file).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from exc


def _sorts(args: argparse.Namespace, header: Any) -> SortTable:
    base = DEFAULT_SORTS
    if args.sorts:
        try:
            text = Path(args.sorts).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.sorts}: {exc.strerror}") from exc
        base = merge_sorts(base, parse_sort_decls(text))
    return merge_sorts(base, header)


def canonical_dict(t: Any, h: Hidden) -> dict[str, Any]:
    hidden = h.carrier.restrict(h.hidden_cells)
    return {
        "type": str(t),
        "public": str(h.public),
        "hidden": str(hidden),
        "value": str(h.value),
        "heap": {f"#{loc}": str(v) for loc, v in h.heap.cells},
    }


def _emit(args: argparse.Namespace, text: str, data: dict[str, Any]) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_run(args: argparse.Namespace) -> int:
    source = parse_program_file(_read(args))
    outcome = run_closed(source.body, _sorts(args, source.sorts))
    _emit(args, str(outcome), canonical_dict(outcome.type, outcome.result))
    return OK


def cmd_check(args: argparse.Namespace) -> int:
    source = parse_formula_file(_read(args))
    sorts, bounds, ctx = _sorts(args, source.sorts), _bounds(args), list(source.context)
    if args.heaplet is not None:
        check_context(ctx)
        try:
            heap = load_heaplet(args.heaplet, sorts, bounds.domain)
            env = load_env(args.env, heap.over)
        except WorldError as exc:
            raise InputError(f"bad literal: {exc}") from exc
        verdict = check_at(ctx, source.body, sorts, heap.over, env, heap, bounds)
    else:
        if args.env:
            raise InputError("--env only makes sense together with --heaplet")
        verdict = check_valid(ctx, source.body, sorts, bounds)
    _emit(args, verdict.to_text(), verdict.as_dict())
    return OK if verdict.holds else FAILS


def cmd_entail(args: argparse.Namespace) -> int:
    source = parse_entailment_file(_read(args))
    sorts, bounds = _sorts(args, source.sorts), _bounds(args)
    verdict = entails(list(source.context), source.body.lhs, source.body.rhs, sorts, bounds)
    _emit(args, verdict.to_text(), verdict.as_dict())
    return OK if verdict.holds else FAILS


def cmd_laws(args: argparse.Namespace) -> int:
    sorts = _sorts(args, ()) if args.sorts else None
    domain = None
    if args.int_min is not None or args.int_max is not None:
        lo = 0 if args.int_min is None else args.int_min
        hi = 1 if args.int_max is None else args.int_max
        if lo > hi:
            raise InputError(f"empty int domain {lo}..{hi}")
        domain = range(lo, hi + 1)
    report = check_laws(
        args.suite, seed=args.seed, no_ucl=args.no_ucl, sorts=sorts, domain=domain, max_world=args.max_world
    )
    _emit(args, report.to_text(), report.as_dict())
    return OK if report.ok else FAILS


COMMANDS = {"run": cmd_run, "check": cmd_check, "entail": cmd_entail, "laws": cmd_laws}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HigherOrderError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (TypeCheckError, TypeError_) as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except Exception as exc:  # anything else is a bug in the model
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
