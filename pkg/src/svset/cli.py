"""Command-line frontend: evaluate CTL formulas on PNML nets, verify
against the explicit oracle, decode and count results.

Exit codes: 0 success, 1 usage/input errors or verification mismatch,
2 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from math import inf

from . import ctl, oracle
from .evaluator import (
    EvalOptions,
    EvalStats,
    NonConvergenceError,
    evaluate_with_stats,
)
from .petrinet import PetriNet, PnmlError, load_capacity_config, parse_pnml
from .svs import CanonicalLimitError, SymbolicVectorSet
from .vectors import format_vector, parse_vector


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit 1
        raise UsageError(message)


@dataclass
class RunReport:
    formula: str
    options: dict
    result: SymbolicVectorSet
    stats: EvalStats | None = None
    membership: dict[str, bool] = field(default_factory=dict)
    count: int | None = None

    def to_json(self) -> dict:
        out: dict = {
            "formula": self.formula,
            "options": self.options,
            "result": self.result.to_json(),
        }
        if self.stats is not None:
            out["stats"] = self.stats.to_json()
        if self.membership:
            out["membership"] = self.membership
        if self.count is not None:
            # large exact counts do not survive JSON number parsing
            out["count"] = self.count if abs(self.count) < 2**53 else str(self.count)
        return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="svset", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="evaluate a CTL formula on a net")
    check.add_argument("--net", required=True, help="PNML file")
    check.add_argument("--formula", required=True, help="CTL formula text")
    check.add_argument("--capacity", default="inf", help="uniform capacity (int or 'inf')")
    check.add_argument("--config", help="sidecar JSON with per-place capacities")
    check.add_argument("--no-saturation", action="store_true")
    check.add_argument("--max-iterations", type=int, default=10_000)
    check.add_argument(
        "--contains", action="append", default=[], metavar="V1,V2,...",
        help="answer membership of a marking (repeatable)",
    )
    check.add_argument("--count", action="store_true", help="count markings within capacity")
    check.add_argument("--stats", action="store_true")
    check.add_argument("--json", action="store_true", dest="as_json")

    verify = sub.add_parser("verify", help="cross-check against the explicit oracle")
    verify.add_argument("--net", help="PNML file")
    verify.add_argument("--formula", help="CTL formula text")
    verify.add_argument("--capacity", type=int, help="finite uniform capacity")
    verify.add_argument("--config", help="sidecar JSON with per-place capacities")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--random", type=int, metavar="N", help="run N seeded random cases")
    verify.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    return parser


def _effective_net(args) -> PetriNet:
    net = parse_pnml(args.net)
    capacity = getattr(args, "capacity", None)
    uniform = None
    if isinstance(capacity, str):
        uniform = None if capacity == "inf" else int(capacity)
    elif capacity is not None:
        uniform = capacity
    per_place = load_capacity_config(args.config) if args.config else None
    if uniform is not None or per_place:
        net = net.with_capacities(uniform=uniform, per_place=per_place)
    return net, uniform


def cmd_check(args) -> int:
    net, uniform = _effective_net(args)
    parsed = ctl.parse_formula(args.formula)
    core = ctl.reduce_formula(ctl.desugar(parsed))
    opts = EvalOptions(
        capacity=uniform if uniform is not None else inf,
        saturation=not args.no_saturation,
        max_iterations=args.max_iterations,
        collect_stats=args.stats,
    )
    result, stats = evaluate_with_stats(net, core, opts)
    report = RunReport(
        formula=args.formula,
        options={
            "capacity": "inf" if opts.capacity == inf else opts.capacity,
            "saturation": opts.saturation,
            "max_iterations": opts.max_iterations,
        },
        result=result,
        stats=stats if args.stats else None,
    )
    for text in args.contains:
        m = parse_vector(text)
        report.membership[format_vector(m)] = result.contains(m)
    if args.count:
        if uniform is None:
            raise UsageError("--count needs a finite --capacity")
        report.count = result.count_within(uniform)
    if args.as_json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        _print_report(report)
    return 0


def _print_report(report: RunReport) -> None:
    print(f"formula: {report.formula}")
    print(f"members: {len(report.result)}")
    for sv in report.result:
        inc = " ".join(format_vector(q) for q in sv.include)
        exc = " ".join(format_vector(q) for q in sv.exclude)
        print(f"  ({{{inc}}}, {{{exc}}})")
    for key, value in report.membership.items():
        print(f"contains {key}: {'true' if value else 'false'}")
    if report.count is not None:
        print(f"count: {report.count}")
    if report.stats is not None:
        s = report.stats
        print(
            f"stats: iterations={s.iterations} peak={s.peak} "
            f"final={s.final} ms={s.ms:.1f}"
        )
        if s.capacity_schedule:
            print(f"capacity schedule: {s.capacity_schedule}")


def cmd_verify(args) -> int:
    if args.random is not None:
        reports = oracle.run_random_suite(
            args.seed, args.random, budget=args.budget
        )
        failures = [r for r in reports if not r.passed]
        print(f"{len(reports) - len(failures)}/{len(reports)} cases pass")
        for r in failures:
            print(f"  {r}")
        return 1 if failures else 0
    if not args.net or not args.formula or args.capacity is None:
        raise UsageError("verify needs --net, --formula and --capacity (or --random N)")
    net, _ = _effective_net(args)
    formula = ctl.parse_formula(args.formula)
    report = oracle.check_equiv(net, formula, budget=args.budget)
    print(report)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            return cmd_check(args)
        return cmd_verify(args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        UsageError,
        PnmlError,
        ctl.CtlSyntaxError,
        CanonicalLimitError,
        oracle.BudgetExceededError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
