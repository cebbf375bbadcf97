"""Command line front end.

Exit codes:
  reduce  0 ok (also for degenerate instances answered directly), 2 bad input
  solve   0 FEASIBLE, 1 INFEASIBLE, 3 BUDGET-EXCEEDED, 2 bad input
  verify  0 AGREE, 4 DISAGREE, 3 BUDGET-EXCEEDED, 2 bad input or oracle too small
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .core import (
    DegenerateInstanceError,
    MalformedInputError,
    ReductionError,
    SizeGuardError,
    ThreeSatInstance,
    UnitSystem,
)
from .ilp import lift_ilp, reduce_ilp
from .serialize import (
    dumps_system,
    load_ilp,
    load_subset_sum,
    loads_system,
    render_system,
    system_stats,
)
from .solver import (
    SolveLimits,
    Status,
    brute_force_3sat,
    brute_force_ilp,
    brute_force_subset_sum,
    lift_subset_sum,
    solve_unit_system,
)
from .subset_sum import reduce_subset_sum
from .threesat import lift_3sat, parse_dimacs, reduce_3sat

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_DISAGREE = 4

KINDS = ("subset-sum", "3sat", "ilp")


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(kind: str, path: str, bits: int | None):
    text = _read(path)
    try:
        if kind == "subset-sum":
            return load_subset_sum(text)
        if kind == "3sat":
            return parse_dimacs(text)
        return load_ilp(text, bits)
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path}: not JSON ({exc})") from None
    except MalformedInputError as exc:
        raise _InputError(f"{path}: {exc}") from None


def _reduce(kind: str, inst) -> UnitSystem:
    if kind == "subset-sum":
        return reduce_subset_sum(inst)
    if kind == "3sat":
        return reduce_3sat(inst)
    return reduce_ilp(inst)


def _source_from_meta(sys_: UnitSystem):
    """Rebuild the source instance stored alongside a serialized system."""
    src = sys_.meta.get("source")
    kind = sys_.meta.get("kind")
    if src is None:
        return None, None
    if kind == "subset-sum":
        return kind, load_subset_sum(src)
    if kind == "3sat":
        return kind, ThreeSatInstance.from_ints(src["num_vars"], src["clauses"])
    if kind == "ilp":
        return kind, load_ilp(src)
    return None, None


def _lift(kind: str, inst, sys_: UnitSystem, asg) -> str:
    if kind == "subset-sum":
        return f"subset: {lift_subset_sum(inst, sys_, asg)}"
    if kind == "3sat":
        model = lift_3sat(inst, sys_, asg)
        return "model: " + " ".join(str(i if v else -i) for i, v in enumerate(model, start=1))
    return f"x: {lift_ilp(inst, sys_, asg)}"


def _format_stats(stats: dict) -> str:
    skip = {"checks", "kind"}
    parts = [f"{k}={v}" for k, v in stats.items() if k not in skip and not isinstance(v, dict)]
    lines = [" ".join(parts)]
    for name, ok in stats.get("checks", {}).items():
        lines.append(f"  check {name}: {'pass' if ok else 'FAIL'}")
    return "\n".join(lines)


def cmd_reduce(args: argparse.Namespace) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = _load_instance(args.kind, args.input, args.bits)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.kind == "ilp":
        print(f"bits P={inst.bit_width} (box 0..{(1 << (inst.bit_width + 1)) - 1})")
    try:
        sys_ = _reduce(args.kind, inst)
    except DegenerateInstanceError as exc:
        print(f"degenerate instance: {exc}")
        print("FEASIBLE" if exc.feasible else "INFEASIBLE")
        return EXIT_OK

    text = dumps_system(sys_)
    to_stdout = not args.output or args.output == "-"
    if to_stdout:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    if args.text:
        Path(args.text).write_text(render_system(sys_))
    print(_format_stats(system_stats(sys_)), file=sys.stderr if to_stdout else sys.stdout)
    return EXIT_OK


def _limits(args: argparse.Namespace) -> SolveLimits:
    return SolveLimits(max_nodes=args.max_nodes, deterministic=args.deterministic)


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        sys_ = loads_system(_read(args.input))
    except MalformedInputError as exc:
        raise _InputError(f"{args.input}: {exc}") from None
    result = solve_unit_system(sys_, _limits(args))
    print(result.status.value)
    if result.status is Status.FEASIBLE:
        names = sys_.registry
        print(" ".join(f"{names.name(v)}={result.assignment[v]}" for v in range(sys_.num_vars)))
        kind, inst = _source_from_meta(sys_)
        if inst is not None:
            print(_lift(kind, inst, sys_, result.assignment))
        return EXIT_OK
    if result.status is Status.INFEASIBLE:
        return EXIT_INFEASIBLE
    print(f"nodes={result.nodes}")
    return EXIT_BUDGET


def verify_instance(kind: str, inst, limits: SolveLimits) -> tuple[str, bool | None, bool]:
    """Reduce, solve, lift and compare with the oracle.

    Returns (report, reduction verdict or None on budget, oracle verdict).
    """
    oracle = {
        "subset-sum": brute_force_subset_sum,
        "3sat": brute_force_3sat,
        "ilp": brute_force_ilp,
    }[kind](inst)
    try:
        sys_ = _reduce(kind, inst)
    except DegenerateInstanceError as exc:
        return "reduction: answered directly", exc.feasible, oracle
    result = solve_unit_system(sys_, limits)
    lines = [f"system: vars={sys_.num_vars} eqs={sys_.num_equations}"]
    if result.status is Status.BUDGET_EXCEEDED:
        return "\n".join(lines), None, oracle
    if result.feasible:
        lines.append(_lift(kind, inst, sys_, result.assignment))
    return "\n".join(lines), result.feasible, oracle


def cmd_verify(args: argparse.Namespace) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = _load_instance(args.kind, args.input, args.bits)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    try:
        report, verdict, oracle = verify_instance(args.kind, inst, _limits(args))
    except SizeGuardError as exc:
        raise _InputError(str(exc)) from None
    print(report)
    word = {True: "FEASIBLE", False: "INFEASIBLE", None: "BUDGET-EXCEEDED"}
    print(f"reduction: {word[verdict]}  oracle: {word[oracle]}")
    if verdict is None:
        return EXIT_BUDGET
    print("AGREE" if verdict == oracle else "DISAGREE")
    return EXIT_OK if verdict == oracle else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitred",
        description="Reduce SUBSET-SUM, 3-SAT and equality ILPs to 0/1 equations "
        "with coefficients and constants in {-1, 0, 1}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, kind: bool) -> None:
        if kind:
            p.add_argument("--kind", choices=KINDS, required=True)
        p.add_argument("--input", required=True, help="input file, '-' for stdin")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--max-nodes", type=int, default=SolveLimits.max_nodes)
        p.add_argument(
            "--deterministic",
            action=argparse.BooleanOptionalAction,
            default=True,
            help="branch in variable order and return the smallest solution",
        )
        p.add_argument("--bits", type=int, help="ILP bit width P (default: suggested)")

    p = sub.add_parser("reduce", help="write the unit system of an instance")
    common(p, kind=True)
    p.add_argument("--text", help="also write a readable .eqs rendering")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide a serialized unit system")
    common(p, kind=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="reduce, solve, lift and compare with brute force")
    common(p, kind=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ReductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
