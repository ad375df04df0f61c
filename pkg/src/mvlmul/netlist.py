"""Combinational netlists of library cells wired by single-digit nets.

A :class:`Netlist` is built once (usually through :class:`NetlistBuilder`) and
never mutated afterwards. Evaluation compiles the instances into a cached
topological schedule of lookup tables and then simulates any number of input
vectors at once with numpy.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bill import BillOfCells
from .cells import LIBRARY, get_cell
from .mvl import DigitVector, RangeViolation, ValueRange, as_range

INPUT, CONST, CELL = "input", "const", "cell"


@dataclass(frozen=True)
class Driver:
    kind: str
    instance: str | None = None
    port: str | None = None
    value: int = 0

    def to_dict(self):
        if self.kind == CELL:
            return {"instance": self.instance, "port": self.port}
        if self.kind == CONST:
            return {"const": self.value}
        return {"input": True}

    @classmethod
    def from_dict(cls, d):
        if "instance" in d:
            return cls(CELL, d["instance"], d["port"])
        if "const" in d:
            return cls(CONST, value=int(d["const"]))
        return cls(INPUT)

    def __str__(self):
        if self.kind == CELL:
            return f"{self.instance}.{self.port}"
        return f"const {self.value}" if self.kind == CONST else "primary input"


@dataclass(frozen=True)
class Net:
    id: str
    range: ValueRange
    driver: Driver


@dataclass(frozen=True)
class Instance:
    id: str
    cell: str
    bindings: Mapping[str, str]


@dataclass(frozen=True)
class Operand:
    name: str
    nets: tuple[str, ...]
    radix: int


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


class Netlist:
    def __init__(
        self,
        nets: Iterable[Net] = (),
        instances: Iterable[Instance] = (),
        inputs: Sequence[str] = (),
        outputs: Sequence[str] = (),
        operands: Sequence[Operand] = (),
        output_radix: int = 2,
        function: str | None = None,
        name: str = "",
    ):
        self.nets: dict[str, Net] = {n.id: n for n in nets}
        self.instances: tuple[Instance, ...] = tuple(instances)
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.operands = tuple(operands)
        self.output_radix = output_radix
        self.function = function
        self.name = name

    def __repr__(self):
        return f"Netlist({self.name!r}, {len(self.instances)} instances, {len(self.nets)} nets)"

    @cached_property
    def schedule(self):
        """Instances in topological order; raises on an invalid netlist."""
        problems = validate(self)
        if problems:
            raise ValueError(f"invalid netlist: {problems[0]}")
        order = _topological_order(self)
        if order is None:
            raise ValueError("netlist has a combinational cycle")
        index = {nid: i for i, nid in enumerate(self.nets)}
        steps = []
        for inst in order:
            cell = LIBRARY[inst.cell]
            ins = [index[inst.bindings[p.name]] for p in cell.inputs]
            outs = [index[inst.bindings[p.name]] for p in cell.outputs]
            steps.append((inst.id, cell.luts, ins, outs))
        return index, steps

    def evaluate(self, *operands) -> tuple[int, ...]:
        return evaluate(self, *operands)


def _topological_order(n: Netlist) -> list[Instance] | None:
    producers = {}
    for inst in n.instances:
        cell = LIBRARY.get(inst.cell)
        if cell is None:
            continue
        for p in cell.outputs:
            if p.name in inst.bindings:
                producers[inst.bindings[p.name]] = inst.id
    deps = {}
    users = defaultdict(list)
    for inst in n.instances:
        cell = LIBRARY.get(inst.cell)
        pre = set()
        if cell is not None:
            for p in cell.inputs:
                src = producers.get(inst.bindings.get(p.name))
                if src is not None:
                    pre.add(src)
        deps[inst.id] = pre
        for s in pre:
            users[s].append(inst.id)
    by_id = {inst.id: inst for inst in n.instances}
    pending = {k: len(v) for k, v in deps.items()}
    ready = [inst.id for inst in n.instances if pending[inst.id] == 0]
    order = []
    while ready:
        nxt = []
        for iid in ready:
            order.append(by_id[iid])
            for u in users[iid]:
                pending[u] -= 1
                if pending[u] == 0:
                    nxt.append(u)
        ready = nxt
    return order if len(order) == len(n.instances) else None


def validate(n: Netlist) -> list[Violation]:
    """Structural checks; an empty list means the netlist is well formed."""
    out: list[Violation] = []
    seen_ids = set()
    drivers = defaultdict(list)
    for nid in n.inputs:
        drivers[nid].append("primary input")
    for inst in n.instances:
        if inst.id in seen_ids:
            out.append(Violation("duplicate-instance", inst.id, "instance id used twice"))
        seen_ids.add(inst.id)
        cell = LIBRARY.get(inst.cell)
        if cell is None:
            out.append(Violation("unknown-cell", inst.id, f"no cell named {inst.cell!r}"))
            continue
        names = {p.name for p in cell.ports}
        for port in inst.bindings:
            if port not in names:
                out.append(Violation("unknown-port", f"{inst.id}.{port}", f"{inst.cell} has no such port"))
        for p in cell.ports:
            where = f"{inst.id}.{p.name}"
            nid = inst.bindings.get(p.name)
            if nid is None:
                out.append(Violation("unbound-port", where, f"{inst.cell} port left unconnected"))
                continue
            net = n.nets.get(nid)
            if net is None:
                out.append(Violation("unknown-net", where, f"net {nid!r} does not exist"))
                continue
            if p.direction == "in":
                if net.range > p.range:
                    out.append(Violation(
                        "range", where,
                        f"net {nid} range {net.range} exceeds port range {p.range}"))
            else:
                drivers[nid].append(where)
                if net.range != p.range:
                    out.append(Violation(
                        "range", where,
                        f"net {nid} declared range {net.range} but driver range is {p.range}"))
                if net.driver.kind != "cell" or (net.driver.instance, net.driver.port) != (inst.id, p.name):
                    out.append(Violation("driver-mismatch", where, f"net {nid} records driver {net.driver}"))
    for nid, net in n.nets.items():
        ds = drivers.get(nid, [])
        if net.driver.kind == CONST:
            ds = ds + ["const"]
        if len(ds) > 1:
            out.append(Violation("multiple-drivers", nid, ", ".join(ds)))
        elif not ds:
            out.append(Violation("undriven", nid, f"net has no driver (records {net.driver})"))
        if net.driver.kind == INPUT and nid not in n.inputs:
            out.append(Violation("undriven", nid, "marked as primary input but not listed"))
        if net.driver.kind == CONST and net.driver.value not in net.range:
            out.append(Violation("range", nid, f"constant {net.driver.value} outside range"))
    for nid in list(n.inputs) + list(n.outputs):
        if nid not in n.nets:
            out.append(Violation("unknown-net", nid, "primary input/output net does not exist"))
    for op in n.operands:
        for nid in op.nets:
            if nid not in n.inputs:
                out.append(Violation("operand", op.name, f"{nid} is not a primary input"))
    if not out and _topological_order(n) is None:
        out.append(Violation("cycle", n.name or "netlist", "combinational loop"))
    return out


def simulate(n: Netlist, values: Mapping[str, np.ndarray], keep_all: bool = False) -> dict[str, np.ndarray]:
    """Evaluate a batch of input vectors.

    ``values`` maps every primary input net to an integer array; all arrays
    share one length. Returns the output nets (or every net with
    ``keep_all``). Raises :class:`RangeViolation` naming the first net whose
    value leaves its declared range.
    """
    index, steps = n.schedule
    vals: list[np.ndarray | None] = [None] * len(index)
    size = None
    for nid in n.inputs:
        arr = np.asarray(values[nid], dtype=np.int8)
        rng = n.nets[nid].range
        if arr.size and (arr.min() < 0 or arr.max() > rng.max_value):
            raise RangeViolation(f"primary input {nid}: value outside 0..{rng.max_value}")
        vals[index[nid]] = arr
        size = arr.shape
    if size is None:
        size = np.shape(next(iter(values.values()))) if values else (1,)
    for nid, net in n.nets.items():
        if net.driver.kind == CONST:
            vals[index[nid]] = np.full(size, net.driver.value, dtype=np.int8)
    ids = list(index)
    for _iid, luts, ins, outs in steps:
        key = tuple(vals[i] for i in ins)
        for lut, o in zip(luts, outs):
            v = lut[key]
            limit = n.nets[ids[o]].range.max_value
            if v.size and v.max() > limit:
                raise RangeViolation(f"net {ids[o]}: simulated value {int(v.max())} exceeds range {limit}")
            vals[o] = v
    if keep_all:
        return {nid: vals[i] for nid, i in index.items()}
    return {nid: vals[index[nid]] for nid in n.outputs}


def operand_digits(n: Netlist, operands: Sequence[int | DigitVector | Sequence[int]]) -> dict[str, int]:
    if len(operands) != len(n.operands):
        raise TypeError(f"{n.name or 'netlist'} takes {len(n.operands)} operands, got {len(operands)}")
    out = {}
    for op, value in zip(n.operands, operands):
        if isinstance(value, int):
            width = len(op.nets)
            if value >= op.radix**width or value < 0:
                raise RangeViolation(f"operand {op.name}={value} does not fit in {width} digits")
            digits = [(value // op.radix**i) % op.radix for i in range(width)]
        else:
            digits = list(value)
        if len(digits) != len(op.nets):
            raise TypeError(f"operand {op.name} needs {len(op.nets)} digits")
        out.update(zip(op.nets, digits))
    return out


def evaluate(n: Netlist, *operands) -> tuple[int, ...]:
    """Evaluate one input vector given as integers or digit vectors per operand."""
    inputs = operand_digits(n, operands)
    res = simulate(n, {k: np.array([v], dtype=np.int8) for k, v in inputs.items()})
    return tuple(int(res[nid][0]) for nid in n.outputs)


def bill_of_cells(n: Netlist) -> BillOfCells:
    return BillOfCells(inst.cell for inst in n.instances)


class NetlistBuilder:
    def __init__(self, name: str = ""):
        self.name = name
        self.nets: dict[str, Net] = {}
        self.instances: list[Instance] = []
        self.inputs: list[str] = []
        self.operands: list[Operand] = []
        self._const: dict[int, str] = {}

    def _new_net(self, rng, driver, nid=None) -> str:
        nid = nid or f"n{len(self.nets)}"
        if nid in self.nets:
            raise ValueError(f"net {nid} already exists")
        self.nets[nid] = Net(nid, as_range(rng), driver)
        return nid

    def input(self, name: str, rng) -> str:
        nid = self._new_net(rng, Driver(INPUT), name)
        self.inputs.append(nid)
        return nid

    def operand(self, name: str, width: int, radix: int, rng=None) -> list[str]:
        rng = rng if rng is not None else radix - 1
        nets = [self.input(f"{name}{i}", rng) for i in range(width)]
        self.operands.append(Operand(name, tuple(nets), radix))
        return nets

    def const(self, value: int = 0) -> str:
        if value not in self._const:
            self._const[value] = self._new_net(max(1, value), Driver(CONST, value=value), f"const{value}")
        return self._const[value]

    def range_of(self, nid: str) -> ValueRange:
        return self.nets[nid].range

    def add(self, cell_name: str, *inputs: str) -> tuple[str, ...]:
        cell = get_cell(cell_name)
        if len(inputs) != len(cell.inputs):
            raise TypeError(f"{cell_name} takes {len(cell.inputs)} inputs")
        iid = f"u{len(self.instances)}"
        bindings = {p.name: nid for p, nid in zip(cell.inputs, inputs)}
        outs = []
        for p in cell.outputs:
            nid = self._new_net(p.range, Driver(CELL, iid, p.name))
            bindings[p.name] = nid
            outs.append(nid)
        self.instances.append(Instance(iid, cell_name, bindings))
        return tuple(outs)

    def build(self, outputs: Sequence[str], output_radix: int, function: str | None = None) -> Netlist:
        return Netlist(
            self.nets.values(), self.instances, self.inputs, outputs,
            self.operands, output_radix, function, self.name,
        )


def to_dict(n: Netlist) -> dict:
    return {
        "inputs": [{"name": nid, "range": n.nets[nid].range.max_value} for nid in n.inputs],
        "outputs": list(n.outputs),
        "instances": [
            {"id": i.id, "cell": i.cell, "bindings": dict(i.bindings)} for i in n.instances
        ],
        "nets": [
            {"id": net.id, "range": net.range.max_value, "driver": net.driver.to_dict()}
            for net in n.nets.values()
        ],
        "meta": {
            "name": n.name,
            "function": n.function,
            "output_radix": n.output_radix,
            "operands": [
                {"name": op.name, "radix": op.radix, "nets": list(op.nets)} for op in n.operands
            ],
        },
    }


def from_dict(d: Mapping) -> Netlist:
    meta = d.get("meta", {})
    nets = [Net(x["id"], ValueRange(int(x["range"])), Driver.from_dict(x["driver"])) for x in d["nets"]]
    instances = [Instance(x["id"], x["cell"], dict(x["bindings"])) for x in d["instances"]]
    operands = [Operand(o["name"], tuple(o["nets"]), int(o["radix"])) for o in meta.get("operands", [])]
    return Netlist(
        nets, instances, [x["name"] for x in d["inputs"]], d["outputs"], operands,
        int(meta.get("output_radix", 2)), meta.get("function"), meta.get("name", ""),
    )


def to_json(n: Netlist) -> str:
    return json.dumps(to_dict(n), indent=1) + "\n"


def from_json(text: str) -> Netlist:
    return from_dict(json.loads(text))
