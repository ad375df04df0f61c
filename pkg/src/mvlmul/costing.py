"""Transistor-count schemes, bill costing, the published bills and comparisons.

The published bills are pinned as data and never derived from a generator,
so table reproduction does not depend on the compression policy.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .bill import BillOfCells, cell_sort_key


class UncostedCell(KeyError):
    def __init__(self, cell: str, scheme: str):
        super().__init__(cell)
        self.cell, self.scheme = cell, scheme

    def __str__(self):
        return f"cell {self.cell!r} has no cost in scheme {self.scheme!r}"


@dataclass(frozen=True)
class CostScheme:
    name: str
    costs: Mapping[str, int]
    label: str = ""

    def __post_init__(self):
        for cell, t in self.costs.items():
            if t <= 0:
                raise ValueError(f"{self.name}: non-positive cost for {cell}")

    def __getitem__(self, cell: str) -> int:
        try:
            return self.costs[cell]
        except KeyError:
            raise UncostedCell(cell, self.name) from None

    def __contains__(self, cell: str) -> bool:
        return cell in self.costs

    @property
    def short(self) -> str:
        return self.label or self.name


# Sub-blocks of the quaternary 1-digit multiplier. "min" shares the threshold
# inverters driven by each operand; "subblock" duplicates them per sub-block.
QMUL1_PARTS = (
    ("A inverters (NQI, NQI/, IQI, PQI, PQI/)", {"min": 12, "subblock": 24}),
    ("B inverters (NQI, NQI/, IQI, PQI, PQI/)", {"min": 10, "subblock": 20}),
    ("0202, 0321 sub-circuits", {"min": 10, "subblock": 10}),
    ("0011, 0012 sub-circuits", {"min": 10, "subblock": 10}),
    ("MUX4", {"min": 12, "subblock": 12}),
)


def qmul1_cost(variant: str) -> int:
    return sum(parts[variant] for _, parts in QMUL1_PARTS)


# decoder: three threshold inverters plus binary gates around a 9 T XOR
DECODER_T = 21
ENCODER_T = 14
XOR_T = 9

SCHEMES: dict[str, CostScheme] = {
    s.name: s
    for s in (
        CostScheme("binary-fa16", {"AND2": 6, "FA": 16, "HA": 16, "XOR2": XOR_T,
                                   "DEC_Q2B": DECODER_T, "ENC_B2Q": ENCODER_T}, "fa16"),
        CostScheme("binary-fa28", {"AND2": 6, "FA": 28, "HA": 12, "XOR2": XOR_T,
                                   "DEC_Q2B": DECODER_T, "ENC_B2Q": ENCODER_T}, "fa28"),
        CostScheme("quat-min", {"QMUL1": qmul1_cost("min"), "Q331": 100, "Q332": 154,
                                "QH32": 50, "QH31": 26}, "min"),
        CostScheme("quat-subblock", {"QMUL1": qmul1_cost("subblock"), "Q331": 118, "Q332": 184,
                                     "QH32": 54, "QH31": 30}, "subblock"),
    )
}
BINARY_SCHEMES = ("binary-fa16", "binary-fa28")
QUATERNARY_SCHEMES = ("quat-min", "quat-subblock")


def get_scheme(name: str) -> CostScheme:
    if name in SCHEMES:
        return SCHEMES[name]
    for s in SCHEMES.values():
        if s.label == name:
            return s
    raise KeyError(f"unknown cost scheme {name!r}")


@dataclass
class CostBreakdown:
    scheme: str
    total: int
    rows: list[tuple[str, int, int, int]]  # cell, count, unit cost, subtotal


def cost_of_bill(bill: Mapping[str, int], scheme: CostScheme | str) -> CostBreakdown:
    scheme = get_scheme(scheme) if isinstance(scheme, str) else scheme
    rows = []
    for cell, count in bill.items():
        if count <= 0:
            continue
        unit = scheme[cell]
        rows.append((cell, count, unit, count * unit))
    return CostBreakdown(scheme.name, sum(r[3] for r in rows), rows)


@dataclass
class PaperRow:
    label: str
    bill: BillOfCells


@dataclass
class PaperTable:
    """A published table: labelled rows of bills costed under several schemes."""

    key: str
    title: str
    rows: list[PaperRow]
    schemes: tuple[str, ...]

    @property
    def bill(self) -> BillOfCells:
        total = BillOfCells()
        for r in self.rows:
            total = total + r.bill
        return total

    def totals(self) -> dict[str, int]:
        return {s: cost_of_bill(self.bill, s).total for s in self.schemes}


def _b(**counts) -> BillOfCells:
    return BillOfCells(counts)


BINARY_8X8_ROWS = [
    PaperRow("1-bit multiplier", _b(AND2=64)),
    PaperRow("Wallace FAs", _b(FA=38)),
    PaperRow("Wallace HAs", _b(HA=15)),
    PaperRow("Final CPAs", _b(FA=9, HA=1)),
]
QUAT_ADDER_BILL = _b(Q331=13, Q332=9, QH32=3, QH31=2)


def paper_bills() -> dict[str, BillOfCells]:
    core = sum((r.bill for r in BINARY_8X8_ROWS), BillOfCells())
    return {
        "binary-8x8": core,
        "quat-direct-adders": BillOfCells(QUAT_ADDER_BILL),
        "quat-direct-full": QUAT_ADDER_BILL + _b(QMUL1=16),
        # one decoder + encoder per "interface digit", four of them as published
        "hybrid-4x4": core + _b(DEC_Q2B=4, ENC_B2Q=4),
        # every operand digit decoded and every product digit encoded
        "hybrid-4x4-full": core + _b(DEC_Q2B=8, ENC_B2Q=8),
    }


def paper_tables() -> list[PaperTable]:
    bills = paper_bills()
    return [
        PaperTable("qmul1", "Quaternary 1-digit multiplier transistor count",
                   [PaperRow("QMUL1", _b(QMUL1=1))], QUATERNARY_SCHEMES),
        PaperTable("binary-8x8", "8 x 8 bit multiplier transistor count",
                   BINARY_8X8_ROWS, BINARY_SCHEMES),
        PaperTable("hybrid-4x4", "Quaternary multiplier with binary interfaces",
                   [PaperRow("Interface", _b(DEC_Q2B=4, ENC_B2Q=4)),
                    PaperRow("8x8 bit multiplier", bills["binary-8x8"])], BINARY_SCHEMES),
        PaperTable("quat-adders", "Quaternary adders transistor count",
                   [PaperRow(c, _b(**{c: 1})) for c in ("Q331", "Q332", "QH32", "QH31")],
                   QUATERNARY_SCHEMES),
        PaperTable("quat-direct-adders", "Quaternary multiplier transistor count",
                   [PaperRow(c, _b(**{c: n})) for c, n in QUAT_ADDER_BILL.items()],
                   QUATERNARY_SCHEMES),
    ]


def truncate2(x: Fraction | float) -> str:
    """Two decimals, truncated toward zero (1892/2888 prints as 0.65)."""
    q = Fraction(x)
    hundredths = (q.numerator * 100) // q.denominator
    return f"{hundredths // 100}.{hundredths % 100:02d}"


@dataclass
class ReportEntry:
    name: str
    scheme: str
    bill: BillOfCells
    total: int
    ratio: Fraction

    @property
    def label(self) -> str:
        return f"{self.name}-{self.scheme}"


@dataclass
class ComparisonReport:
    entries: list[ReportEntry]
    ratios: dict[tuple[str, str], Fraction] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def ratio_text(self, a: str, b: str) -> str:
        return truncate2(self.ratios[(a, b)])

    def cells(self) -> list[str]:
        names = {c for e in self.entries for c in e.bill if e.bill[c] > 0}
        return sorted(names, key=cell_sort_key)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cells = self.cells()
        w.writerow(["architecture", "scheme", *cells, "total", "ratio_to_baseline"])
        for e in self.entries:
            w.writerow([e.name, e.scheme, *(e.bill.get(c, 0) for c in cells), e.total, truncate2(e.ratio)])
        return buf.getvalue()

    def to_markdown(self) -> str:
        cells = self.cells()
        head = ["architecture", "scheme", *cells, "total", "ratio to baseline"]
        out = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for e in self.entries:
            row = [e.name, e.scheme, *(str(e.bill.get(c, 0)) for c in cells), str(e.total), truncate2(e.ratio)]
            out.append("| " + " | ".join(row) + " |")
        if self.ratios:
            out.append("")
            for (a, b), r in self.ratios.items():
                out.append(f"- ratio({a} / {b}) = {truncate2(r)}")
        for n in self.notes:
            out.append(f"- note: {n}")
        return "\n".join(out) + "\n"


def compare(
    architectures: Sequence[tuple[str, Mapping[str, int], CostScheme | str]],
    notes: Iterable[str] = (),
) -> ComparisonReport:
    """Cost each (name, bill, scheme) entry; the first entry is the baseline."""
    if len(architectures) < 2:
        raise ValueError("compare needs at least two architectures")
    entries = []
    for name, bill, scheme in architectures:
        scheme = get_scheme(scheme) if isinstance(scheme, str) else scheme
        entries.append(ReportEntry(name, scheme.short, BillOfCells(bill), cost_of_bill(bill, scheme).total, Fraction(0)))
    base = entries[0].total
    for e in entries:
        e.ratio = Fraction(e.total, base) if base else Fraction(0)
    ratios = {}
    for i, a in enumerate(entries):
        for b in entries[i + 1:]:
            if not b.total:
                continue
            ratios[(a.label, b.label)] = Fraction(a.total, b.total)
    return ComparisonReport(entries, ratios, list(notes))
