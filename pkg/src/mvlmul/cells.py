"""Behavioural cell library.

Every cell is a total truth function over ranged ports. Transistor costs live
in :mod:`mvlmul.costing`; cells only describe function.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .mvl import BINARY, QUATERNARY, TERNARY, RangeViolation, ValueRange

IN, OUT = "in", "out"


@dataclass(frozen=True)
class PortSpec:
    name: str
    direction: str
    range: ValueRange


@dataclass(frozen=True, eq=False)
class Cell:
    name: str
    ports: tuple[PortSpec, ...]
    truth: Callable[..., tuple[int, ...]]
    description: str = ""

    def __post_init__(self):
        names = [p.name for p in self.ports]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: duplicate port names {names}")

    @property
    def inputs(self) -> tuple[PortSpec, ...]:
        return tuple(p for p in self.ports if p.direction == IN)

    @property
    def outputs(self) -> tuple[PortSpec, ...]:
        return tuple(p for p in self.ports if p.direction == OUT)

    def port(self, name: str) -> PortSpec:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(f"{self.name} has no port {name!r}")

    @cached_property
    def luts(self) -> tuple[np.ndarray, ...]:
        """One lookup table per output, indexed by the input digits."""
        shape = tuple(p.range.levels for p in self.inputs)
        tables = [np.zeros(shape, dtype=np.int8) for _ in self.outputs]
        for combo in itertools.product(*(range(n) for n in shape)):
            for table, value in zip(tables, eval_cell(self, combo)):
                table[combo] = value
        return tuple(tables)

    def __call__(self, *inputs: int) -> tuple[int, ...]:
        return eval_cell(self, inputs)

    def __repr__(self) -> str:
        return f"Cell({self.name})"


def eval_cell(cell: Cell, inputs: Sequence[int]) -> tuple[int, ...]:
    ins = cell.inputs
    if len(inputs) != len(ins):
        raise TypeError(f"{cell.name} takes {len(ins)} inputs, got {len(inputs)}")
    for port, v in zip(ins, inputs):
        if v not in port.range:
            raise RangeViolation(
                f"{cell.name}.{port.name}: value {v} outside 0..{port.range.max_value}"
            )
    outs = tuple(int(v) for v in cell.truth(*(int(v) for v in inputs)))
    for port, v in zip(cell.outputs, outs):
        if v not in port.range:
            raise RangeViolation(
                f"{cell.name}.{port.name}: produced {v} outside 0..{port.range.max_value}"
            )
    return outs


def _cell(name, ins, outs, truth, description=""):
    ports = tuple(PortSpec(n, IN, r) for n, r in ins) + tuple(PortSpec(n, OUT, r) for n, r in outs)
    return Cell(name, ports, truth, description)


def _add(radix):
    def truth(*xs):
        return divmod(sum(xs), radix)[::-1]

    return truth


AND2 = _cell("AND2", [("a", BINARY), ("b", BINARY)], [("y", BINARY)], lambda a, b: (a & b,),
             "1-bit multiplier")
XOR2 = _cell("XOR2", [("a", BINARY), ("b", BINARY)], [("y", BINARY)], lambda a, b: (a ^ b,))
HA = _cell("HA", [("a", BINARY), ("b", BINARY)], [("s", BINARY), ("cout", BINARY)], _add(2))
FA = _cell("FA", [("a", BINARY), ("b", BINARY), ("cin", BINARY)],
           [("s", BINARY), ("cout", BINARY)], _add(2))

QMUL1 = _cell("QMUL1", [("a", QUATERNARY), ("b", QUATERNARY)],
              [("qm", QUATERNARY), ("qc", TERNARY)],
              lambda a, b: ((a * b) % 4, (a * b) // 4),
              "quaternary 1-digit multiplier")
Q332 = _cell("Q332", [("a", QUATERNARY), ("b", QUATERNARY), ("cin", TERNARY)],
             [("s", QUATERNARY), ("cout", TERNARY)], _add(4))
Q331 = _cell("Q331", [("a", QUATERNARY), ("b", QUATERNARY), ("cin", BINARY)],
             [("s", QUATERNARY), ("cout", BINARY)], _add(4))
# the ternary input drives the mux select, so the ports are not interchangeable
QH32 = _cell("QH32", [("a", TERNARY), ("b", QUATERNARY)],
             [("s", QUATERNARY), ("cout", BINARY)], _add(4))
QH31 = _cell("QH31", [("a", QUATERNARY), ("b", BINARY)],
             [("s", QUATERNARY), ("cout", BINARY)], _add(4))

DEC_Q2B = _cell("DEC_Q2B", [("q", QUATERNARY)], [("x1", BINARY), ("x0", BINARY)],
                lambda q: (q >> 1, q & 1), "quaternary to binary decoder")
ENC_B2Q = _cell("ENC_B2Q", [("x1", BINARY), ("x0", BINARY)], [("q", QUATERNARY)],
                lambda x1, x0: (2 * x1 + x0,), "binary to quaternary encoder")
QINV = _cell("QINV", [("q", QUATERNARY)],
             [("nqi", BINARY), ("iqi", BINARY), ("pqi", BINARY)],
             lambda q: (int(q < 1), int(q < 2), int(q < 3)),
             "threshold inverters at levels 1, 2 and 3")

LIBRARY: dict[str, Cell] = {
    c.name: c
    for c in (AND2, XOR2, HA, FA, QMUL1, Q332, Q331, QH32, QH31, DEC_Q2B, ENC_B2Q, QINV)
}


def get_cell(name: str) -> Cell:
    try:
        return LIBRARY[name]
    except KeyError:
        raise KeyError(f"unknown cell {name!r}") from None


def qmul1(a: int, b: int) -> tuple[int, int]:
    return eval_cell(QMUL1, (a, b))


def q332(a: int, b: int, cin: int) -> tuple[int, int]:
    return eval_cell(Q332, (a, b, cin))


def q331(a: int, b: int, cin: int) -> tuple[int, int]:
    return eval_cell(Q331, (a, b, cin))


def qh32(a: int, b: int) -> tuple[int, int]:
    return eval_cell(QH32, (a, b))


def qh31(a: int, b: int) -> tuple[int, int]:
    return eval_cell(QH31, (a, b))


def decode_q2b(q: int) -> tuple[int, int]:
    return eval_cell(DEC_Q2B, (q,))


def encode_b2q(x1: int, x0: int) -> int:
    return eval_cell(ENC_B2Q, (x1, x0))[0]


def mvl_inverters(q: int) -> tuple[int, int, int]:
    return eval_cell(QINV, (q,))


def enumerate_truth_table(cell: Cell) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    spaces = [range(p.range.levels) for p in cell.inputs]
    return [(combo, eval_cell(cell, combo)) for combo in itertools.product(*spaces)]


def truth_table_csv(cell: Cell) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([p.name for p in cell.inputs] + [p.name for p in cell.outputs])
    for ins, outs in enumerate_truth_table(cell):
        w.writerow(list(ins) + list(outs))
    return buf.getvalue()
