"""Reproduction report: pinned published tables, errata, and generator census.

Everything here is a pure function of pinned data and deterministic
generators, so rendering is byte-stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .bill import BillOfCells
from .costing import (
    BINARY_8X8_ROWS,
    BINARY_SCHEMES,
    QMUL1_PARTS,
    QUATERNARY_SCHEMES,
    ComparisonReport,
    compare,
    cost_of_bill,
    get_scheme,
    paper_bills,
    paper_tables,
    truncate2,
)
from .generators import generate_binary_multiplier, generate_quaternary_direct, generate_quaternary_hybrid
from .netlist import bill_of_cells

CENSUS_TOLERANCE = Fraction(5, 100)

ERRATA = (
    "QMUL1 truth table: the printed rows for A=1 list a+b instead of a*b "
    "(e.g. 1x3 shown as QC=1, QM=0); the cell implements a*b, matching the A=0, 2, 3 rows.",
    "hybrid 4x4 interface: the published 140 T counts 4 decoders and 4 encoders, but 4-digit "
    "operands need 8 decoders and an 8-digit product needs 8 encoders (280 T); both totals are listed.",
    "direct 4x4 headline totals (2888 / 3412) cover the compressor tree only; with the 16 QMUL1 "
    "cells the totals are 3752 / 4628.",
    "binary 8x8 final adder: with the FA:38 HA:15 Wallace tree, the 2-row output still needs "
    "FA:9 HA:2 for a 16-bit product (column 15 receives a tree carry and the column-14 carry); "
    "the published FA:9 HA:1 was not reproducible.",
)


@dataclass
class CensusRow:
    name: str
    scheme: str
    paper_bill: BillOfCells
    generated_bill: BillOfCells
    paper_total: int
    generated_total: int

    @property
    def delta(self) -> Fraction:
        return Fraction(self.generated_total - self.paper_total, self.paper_total)

    @property
    def within_tolerance(self) -> bool:
        return abs(self.delta) <= CENSUS_TOLERANCE

    @property
    def exact(self) -> bool:
        return +self.paper_bill == +self.generated_bill


def generator_bills(policy: str = "wallace") -> dict[str, BillOfCells]:
    """Generator counterparts of the published bills, for an 8-bit / 4-digit multiplier."""
    binary = generate_binary_multiplier(8, policy)
    direct = generate_quaternary_direct(4, policy)
    hybrid = generate_quaternary_hybrid(4, policy)
    adders = direct.reduction_bill + direct.cpa_bill
    return {
        "binary-8x8": bill_of_cells(binary.netlist),
        "quat-direct-adders": adders,
        "quat-direct-full": bill_of_cells(direct.netlist),
        "hybrid-4x4-full": bill_of_cells(hybrid.netlist),
    }


def census(policy: str = "wallace") -> list[CensusRow]:
    published = paper_bills()
    gen = generator_bills(policy)
    schemes = {
        "binary-8x8": BINARY_SCHEMES,
        "hybrid-4x4-full": BINARY_SCHEMES,
        "quat-direct-adders": QUATERNARY_SCHEMES,
        "quat-direct-full": QUATERNARY_SCHEMES,
    }
    rows = []
    for name, names in schemes.items():
        for s in names:
            scheme = get_scheme(s)
            rows.append(CensusRow(
                name, scheme.short, published[name], gen[name],
                cost_of_bill(published[name], scheme).total, cost_of_bill(gen[name], scheme).total,
            ))
    return rows


def headline_comparison() -> ComparisonReport:
    bills = paper_bills()
    return compare(
        [
            ("binary", bills["binary-8x8"], "binary-fa16"),
            ("binary", bills["binary-8x8"], "binary-fa28"),
            ("hybrid", bills["hybrid-4x4"], "binary-fa16"),
            ("hybrid", bills["hybrid-4x4"], "binary-fa28"),
            ("quat-direct", bills["quat-direct-adders"], "quat-min"),
            ("quat-direct", bills["quat-direct-adders"], "quat-subblock"),
        ],
        notes=["baseline is binary-fa16; quat-direct counts the compressor tree only"],
    )


@dataclass
class PaperReport:
    tables: list = field(default_factory=paper_tables)
    comparison: ComparisonReport = field(default_factory=headline_comparison)
    census: list[CensusRow] = field(default_factory=census)

    def totals(self) -> list[tuple[str, str, int]]:
        """(architecture, scheme, total) for every pinned bill under its schemes."""
        bills = paper_bills()
        out = []
        for name, bill in bills.items():
            names = QUATERNARY_SCHEMES if name.startswith("quat") else BINARY_SCHEMES
            for s in names:
                scheme = get_scheme(s)
                out.append((name, scheme.short, cost_of_bill(bill, scheme).total))
        return out

    def to_csv(self) -> str:
        return self.comparison.to_csv()

    def to_dict(self) -> dict:
        return {
            "tables": [
                {
                    "key": t.key,
                    "title": t.title,
                    "rows": [
                        {"label": r.label, "bill": dict(r.bill.items_ordered()),
                         **{get_scheme(s).short: cost_of_bill(r.bill, s).total for s in t.schemes}}
                        for r in t.rows
                    ],
                    "totals": {get_scheme(s).short: v for s, v in t.totals().items()},
                }
                for t in self.tables
            ],
            "totals": [list(t) for t in self.totals()],
            "ratios": {f"{a} / {b}": truncate2(r) for (a, b), r in self.comparison.ratios.items()},
            "census": [
                {"architecture": c.name, "scheme": c.scheme, "published": str(c.paper_bill),
                 "generated": str(c.generated_bill), "published_total": c.paper_total,
                 "generated_total": c.generated_total, "exact": c.exact,
                 "within_5pct": c.within_tolerance}
                for c in self.census
            ],
            "errata": list(ERRATA),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_markdown(self) -> str:
        out = ["# Transistor-count reproduction", ""]

        out += ["## QMUL1 sub-blocks", "", "| sub-block | min | subblock |", "|---|---|---|"]
        for label, parts in QMUL1_PARTS:
            out.append(f"| {label} | {parts['min']} | {parts['subblock']} |")
        q = next(t for t in self.tables if t.key == "qmul1").totals()
        out += [f"| total | {q['quat-min']} | {q['quat-subblock']} |", ""]

        for t in self.tables:
            if t.key == "qmul1":
                continue
            shorts = [get_scheme(s).short for s in t.schemes]
            out += [f"## {t.title}", "", "| row | bill | " + " | ".join(shorts) + " |",
                    "|---|---|" + "---|" * len(shorts)]
            for r in t.rows:
                costs = [str(cost_of_bill(r.bill, s).total) for s in t.schemes]
                out.append(f"| {r.label} | {r.bill} | " + " | ".join(costs) + " |")
            totals = t.totals()
            out += ["| total | | " + " | ".join(str(totals[s]) for s in t.schemes) + " |", ""]

        out += ["## Totals", "", "```", "architecture, scheme, total"]
        out += [f"{a}, {s}, {v}" for a, s, v in self.totals()]
        out += ["```", "", "## Comparison", ""]
        out.append(self.comparison.to_markdown().rstrip("\n"))
        out += ["", "```csv", self.comparison.to_csv().rstrip("\n"), "```", ""]

        out += ["## Generator census vs published bills", "",
                "| architecture | scheme | published | generated | published T | generated T | delta |",
                "|---|---|---|---|---|---|---|"]
        for c in self.census:
            flag = "exact" if c.exact else ("within 5%" if c.within_tolerance else "OUTSIDE 5%")
            sign = "+" if c.delta >= 0 else "-"
            out.append(
                f"| {c.name} | {c.scheme} | {c.paper_bill} | {c.generated_bill} | {c.paper_total} "
                f"| {c.generated_total} | {sign}{truncate2(abs(c.delta) * 100)}% ({flag}) |"
            )
        out += ["", "## Errata", ""]
        out += [f"- erratum: {e}" for e in ERRATA]
        return "\n".join(out) + "\n"


def binary_row_breakdown() -> list[tuple[str, dict[str, int]]]:
    """Per-row costs of the published binary 8x8 bill under each binary scheme."""
    return [
        (r.label, {get_scheme(s).short: cost_of_bill(r.bill, s).total for s in BINARY_SCHEMES})
        for r in BINARY_8X8_ROWS
    ]
