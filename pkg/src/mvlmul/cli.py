"""Command-line entry point: build, verify and report.

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .costing import BINARY_SCHEMES, QUATERNARY_SCHEMES, UncostedCell, cost_of_bill, get_scheme
from .generators import ARCHITECTURES, POLICIES, ConstructionError, build_architecture
from .netlist import bill_of_cells, from_json, to_json, validate
from .report import PaperReport
from .verify import DEFAULT_CAP, exhaustive_verify, sampled_verify

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# published bills for the example configurations, printed next to the generated bill
PUBLISHED = {
    ("binary-wallace", 8): "AND2:64 FA:47 HA:16",
    ("quat-direct", 4): "QMUL1:16 Q331:13 Q332:9 QH32:3 QH31:2",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    arch: str
    width: int
    policy: str | None = None
    schemes: tuple[str, ...] = ()
    out: Path | None = None
    seed: int = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.arch not in ARCHITECTURES:
            raise UsageError(f"unknown architecture {self.arch!r}; choose from {', '.join(ARCHITECTURES)}")
        if self.width < 1:
            raise UsageError("--width must be >= 1")
        if self.policy is not None and self.policy not in POLICIES:
            raise UsageError(f"unknown policy {self.policy!r}")
        valid = BINARY_SCHEMES + ("fa16", "fa28") if self.arch.startswith("binary") or self.arch == "quat-hybrid" \
            else QUATERNARY_SCHEMES + ("min", "subblock")
        for s in self.schemes:
            if s not in valid:
                raise UsageError(f"scheme {s!r} does not apply to {self.arch}")

    @property
    def default_schemes(self) -> tuple[str, ...]:
        if self.schemes:
            return self.schemes
        return BINARY_SCHEMES if self.arch.startswith("binary") or self.arch == "quat-hybrid" else QUATERNARY_SCHEMES


def cmd_build(args) -> int:
    cfg = RunConfig(args.arch, args.width, args.policy, tuple(args.scheme or ()))
    try:
        netlist = build_architecture(cfg.arch, cfg.width, cfg.policy)
    except (ValueError, ConstructionError) as e:
        raise UsageError(str(e)) from None
    out = Path(args.out) if args.out else Path(f"{netlist.name}.json")
    out.write_text(to_json(netlist))
    bill = bill_of_cells(netlist)
    print(f"wrote {out}")
    print(f"bill: {bill}")
    published = PUBLISHED.get((cfg.arch, cfg.width))
    if published and published != str(bill):
        print(f"published: {published}")
    for s in cfg.default_schemes:
        try:
            print(f"cost[{get_scheme(s).short}]: {cost_of_bill(bill, s).total}")
        except UncostedCell as e:
            print(f"cost[{get_scheme(s).short}]: n/a ({e})")
    return EXIT_PASS


def cmd_verify(args) -> int:
    try:
        netlist = from_json(Path(args.netlist).read_text())
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot load netlist {args.netlist}: {e}") from None
    problems = validate(netlist)
    if problems:
        print(f"FAIL: netlist is invalid ({len(problems)} violation(s))", file=sys.stderr)
        for p in problems[:32]:
            print(f"  {p}", file=sys.stderr)
        return EXIT_FAIL
    space = math.prod(op.radix ** len(op.nets) for op in netlist.operands)
    try:
        if args.trials is not None:
            result = sampled_verify(netlist, trials=args.trials, seed=args.seed)
        elif space > args.cap:
            raise UsageError(
                f"{space} cases exceed the cap of {args.cap}; pass --trials N --seed S to sample"
            )
        else:
            result = exhaustive_verify(netlist, cap=args.cap)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "json":
        print(result.to_json())
    if result.passed:
        if args.format != "json":
            print(result)
        return EXIT_PASS
    print(result, file=sys.stderr)
    return EXIT_FAIL


def cmd_report(args) -> int:
    if not args.reproduce_paper:
        raise UsageError("report currently requires --reproduce-paper")
    report = PaperReport()
    text = {"md": report.to_markdown, "csv": report.to_csv, "json": report.to_json}[args.format]()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mvlmul", description="Multi-valued logic multiplier generator and verifier.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="generate a netlist and print its bill of cells")
    b.add_argument("--arch", required=True, choices=ARCHITECTURES)
    b.add_argument("--width", required=True, type=int, help="operand width in digits")
    b.add_argument("--policy", choices=POLICIES)
    b.add_argument("--scheme", action="append", help="cost scheme (repeatable)")
    b.add_argument("--out", help="netlist JSON path (default <name>.json)")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a netlist JSON file against its arithmetic oracle")
    v.add_argument("netlist")
    v.add_argument("--trials", type=int, help="sample this many random cases instead of exhausting")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest input space to exhaust")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="cost comparison tables")
    r.add_argument("--reproduce-paper", action="store_true", help="emit the pinned published tables")
    r.add_argument("--format", choices=("md", "csv", "json"), default="md")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
