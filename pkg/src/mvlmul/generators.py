"""Multiplier and adder generators built on range-aware column compression.

Partial-product digits are collected into columns by weight. The columns are
then compressed stage by stage with 3:2 and 2:2 compressors until no column
holds more than two wires, and a ripple carry-propagate adder (CPA) sums the
last two rows.

Two compression policies are provided:

``wallace``
    Classic line-grouped Wallace reduction. Every wire belongs to a *line*
    (a row of the dot diagram). At each stage the lines are ordered
    (longest first, then narrowest range first) and grouped in threes; inside
    a group every column holding three wires gets a full compressor, every
    column holding two gets a half compressor. Each group emits a sum line and
    a carry line; ungrouped lines pass through untouched.

``dadda``
    Column-wise reduction to the Dadda height limits 2, 3, 4, 6, 9, ...,
    compressing only as much as each stage's limit requires. Wires inside a
    column are consumed oldest first.

In radix 4 the compressor is chosen from the ranges of the wires it receives:
three wires use Q332 when the smallest range is ternary and Q331 when it is
binary; two wires use QH32 or QH31 likewise. Two quaternary wires, which no
half compressor accepts, go through a Q331 whose carry input is tied to 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .mvl import ValueRange
from .netlist import Netlist, NetlistBuilder

POLICIES = ("wallace", "dadda")


class ConstructionError(RuntimeError):
    """The generator produced an illegal connection."""


@dataclass
class Wire:
    net: str
    range: ValueRange
    line: int = 0
    age: int = 0


@dataclass
class Column:
    weight: int
    wires: list[Wire] = field(default_factory=list)

    def __len__(self):
        return len(self.wires)


@dataclass(frozen=True)
class Step:
    column: int
    cell: str
    consumed: tuple[str, ...]
    sum: str
    carry: str | None


@dataclass
class Stage:
    name: str
    steps: list[Step]
    before: list[list[str]]
    after: list[list[str]]


@dataclass
class ReductionPlan:
    radix: int
    policy: str
    stages: list[Stage] = field(default_factory=list)

    def describe(self) -> str:
        lines = [f"radix-{self.radix} {self.policy} reduction, {len(self.stages)} stage(s)"]
        for st in self.stages:
            heights = [len(c) for c in st.before]
            lines.append(f"{st.name}: heights {heights}")
            for s in st.steps:
                carry = f", carry {s.carry} -> col {s.column + 1}" if s.carry else ""
                lines.append(f"  col {s.column}: {s.cell}({', '.join(s.consumed)}) -> sum {s.sum}{carry}")
        return "\n".join(lines)


class _Ctx:
    """Shared state for one compression run."""

    def __init__(self, builder: NetlistBuilder, radix: int, width: int | None):
        self.b = builder
        self.radix = radix
        self.width = width
        self.age = 0
        self.line_order: list[int] = []

    def wire(self, net: str, line: int) -> Wire:
        self.age += 1
        return Wire(net, self.b.range_of(net), line, self.age)

    def keeps(self, weight: int) -> bool:
        # a multiplier of width n never produces a nonzero digit at weight >= 2n
        return self.width is None or weight < self.width


def _triple(radix: int, wires: list[Wire]):
    """(cell, ordered inputs) for a 3:2 compressor, or None if no cell accepts them."""
    if radix == 2:
        return "FA", list(wires)
    ws = sorted(wires, key=lambda w: (-w.range.max_value, w.age))
    small = ws[2].range.max_value
    if small <= 1:
        return "Q331", ws
    if small <= 2:
        return "Q332", ws
    return None


def _pair(radix: int, wires: list[Wire]):
    """(cell, ordered inputs, needs zero carry-in) for a 2:2 compressor."""
    if radix == 2:
        return "HA", list(wires), False
    big, small = sorted(wires, key=lambda w: (-w.range.max_value, w.age))
    if small.range.max_value <= 1:
        return "QH31", [big, small], False
    if small.range.max_value <= 2:
        return "QH32", [small, big], False
    return "Q331", [big, small], True


def _check_ranges(radix: int, wires):
    for w in wires:
        if w.range.max_value > radix - 1:
            raise ConstructionError(f"wire {w.net} range {w.range} exceeds radix-{radix} digit")


def _emit(ctx: _Ctx, col: int, wires: list[Wire], size: int, line_sum: int, line_carry: int):
    """Instantiate a compressor; returns (step, sum wire, carry wire or None)."""
    if size == 3:
        picked = _triple(ctx.radix, wires)
        if picked is None:
            raise ConstructionError(f"no compressor for ranges {[w.range.max_value for w in wires]}")
        cell, ordered = picked
        ins = [w.net for w in ordered]
    else:
        cell, ordered, zero = _pair(ctx.radix, wires)
        ins = [w.net for w in ordered] + ([ctx.b.const(0)] if zero else [])
    s, c = ctx.b.add(cell, *ins)
    step = Step(col, cell, tuple(w.net for w in ordered), s, c)
    carry = ctx.wire(c, line_carry) if ctx.keeps(col + 1) else None
    return step, ctx.wire(s, line_sum), carry


def _snapshot(cols: list[Column]) -> list[list[str]]:
    return [[w.net for w in c.wires] for c in cols]


def _grow(cols: list[Column], weight: int):
    while len(cols) <= weight:
        cols.append(Column(len(cols)))


def _wallace_stage(ctx: _Ctx, cols: list[Column], next_line: int):
    lines: dict[int, list[Wire]] = {}
    for c in cols:
        for w in c.wires:
            lines.setdefault(w.line, []).append(w)
    # previous stage's outputs first, pass-through lines after them
    prev = [lid for lid in ctx.line_order if lid in lines]
    prev += sorted(set(lines) - set(prev))

    def key(line_id):
        ws = lines[line_id]
        return (-len(ws), max(w.range.max_value for w in ws))

    order = sorted(prev, key=key)
    ngroups = len(order) // 3
    group_of = {}
    for g in range(ngroups):
        for pos, lid in enumerate(order[3 * g: 3 * g + 3]):
            group_of[lid] = (g, pos)
    new = [Column(c.weight) for c in cols]
    steps = []
    out_lines = [(next_line + 3 * g, next_line + 3 * g + 1, next_line + 3 * g + 2) for g in range(ngroups)]
    for k, c in enumerate(cols):
        grouped = [[] for _ in range(ngroups)]
        for w in c.wires:
            if w.line in group_of:
                grouped[group_of[w.line][0]].append(w)
            else:
                new[k].wires.append(w)
        for g, ws in enumerate(grouped):
            ls, lc, lspill = out_lines[g]
            ws.sort(key=lambda w: group_of[w.line][1])
            if len(ws) == 1:
                w = ws[0]
                new[k].wires.append(Wire(w.net, w.range, ls, w.age))
                continue
            if not ws:
                continue
            if len(ws) == 3 and _triple(ctx.radix, ws) is None:
                # three quaternary wires: half-compress two, defer the third
                spill = ws[2]
                new[k].wires.append(Wire(spill.net, spill.range, lspill, spill.age))
                ws = ws[:2]
            step, s, carry = _emit(ctx, k, ws, len(ws), ls, lc)
            steps.append(step)
            new[k].wires.append(s)
            if carry is not None:
                _grow(new, k + 1)
                new[k + 1].wires.append(carry)
    ctx.line_order = [lid for trio in out_lines for lid in trio] + order[3 * ngroups:]
    return new, steps, next_line + 3 * ngroups


def _dadda_limits(height: int) -> int:
    d = 2
    while True:
        nxt = d * 3 // 2
        if nxt >= height:
            return d
        d = nxt


def _pick_triple_fifo(radix: int, ws: list[Wire]):
    best = None
    for combo in itertools.combinations(range(len(ws)), 3):
        picked = _triple(radix, [ws[i] for i in combo])
        if picked is None:
            continue
        rank = (0 if picked[0] in ("Q332", "FA") else 1, combo)
        if best is None or rank < best[0]:
            best = (rank, combo)
        if rank[0] == 0:
            break
    return None if best is None else list(best[1])


def _dadda_stage(ctx: _Ctx, cols: list[Column]):
    limit = _dadda_limits(max(len(c) for c in cols))
    new = [Column(c.weight) for c in cols]
    steps = []
    for k in range(len(cols)):
        ws = sorted(cols[k].wires, key=lambda w: w.age)
        while len(ws) + len(new[k].wires) > limit and len(ws) >= 2:
            excess = len(ws) + len(new[k].wires) - limit
            idx = _pick_triple_fifo(ctx.radix, ws) if excess >= 2 and len(ws) >= 3 else None
            if idx is None:
                idx = [0, 1]
            group = [ws[i] for i in idx]
            ws = [w for i, w in enumerate(ws) if i not in idx]
            step, s, carry = _emit(ctx, k, group, len(group), 0, 0)
            steps.append(step)
            new[k].wires.append(s)
            if carry is not None:
                _grow(new, k + 1)
                new[k + 1].wires.append(carry)
        new[k].wires = ws + new[k].wires
    return new, steps


def compress_columns(
    builder: NetlistBuilder,
    cols: list[Column],
    radix: int,
    policy: str = "wallace",
    width: int | None = None,
) -> tuple[ReductionPlan, list[Column]]:
    """Reduce ``cols`` until every column holds at most two wires.

    Instances are added to ``builder``. Carries landing at a weight >= ``width``
    are left unconnected; pass ``width`` only when the result is known to fit.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if radix not in (2, 4):
        raise ValueError(f"unsupported radix {radix}")
    for c in cols:
        _check_ranges(radix, c.wires)
    ctx = _Ctx(builder, radix, width)
    ctx.age = max((w.age for c in cols for w in c.wires), default=0)
    plan = ReductionPlan(radix, policy)
    cols = [Column(c.weight, list(c.wires)) for c in cols]
    next_line = max((w.line for c in cols for w in c.wires), default=0) + 1
    while cols and max(len(c) for c in cols) > 2:
        if len(plan.stages) > 64:
            raise ConstructionError("compression does not converge")
        before = _snapshot(cols)
        if policy == "wallace":
            cols, steps, next_line = _wallace_stage(ctx, cols, next_line)
        else:
            cols, steps = _dadda_stage(ctx, cols)
        for c in cols:
            _check_ranges(radix, c.wires)
        plan.stages.append(Stage(f"stage {len(plan.stages) + 1}", steps, before, _snapshot(cols)))
    return plan, cols


def build_cpa(
    builder: NetlistBuilder,
    cols: list[Column],
    radix: int,
    width: int | None = None,
    plan: ReductionPlan | None = None,
) -> list[str]:
    """Ripple carry-propagate adder over columns of at most two wires.

    Returns one output net per column (``width`` columns if given). Empty
    columns yield the constant-zero net.
    """
    width = len(cols) if width is None else width
    cols = list(cols) + [Column(k) for k in range(len(cols), width)]
    ctx = _Ctx(builder, radix, width)
    steps, outs = [], []
    carry: Wire | None = None
    for k in range(width):
        ws = list(cols[k].wires) + ([carry] if carry is not None else [])
        if len(ws) > 3:
            raise ConstructionError(f"column {k} has {len(ws) - (carry is not None)} wires, CPA needs <= 2")
        _check_ranges(radix, ws)
        carry = None
        if not ws:
            outs.append(builder.const(0))
        elif len(ws) == 1:
            outs.append(ws[0].net)
        else:
            step, s, carry = _emit(ctx, k, ws, len(ws), 0, 0)
            steps.append(step)
            outs.append(s.net)
    if plan is not None:
        plan.stages.append(Stage("cpa", steps, _snapshot(cols[:width]), [[o] for o in outs]))
    return outs


def _columns(n_cols: int) -> list[Column]:
    return [Column(k) for k in range(n_cols)]


def build_partial_products_binary(n: int, builder: NetlistBuilder | None = None, a=None, b=None):
    """AND-array partial products; wire a_i & b_j lands in column i + j on line i."""
    if n < 1:
        raise ValueError("width must be >= 1")
    builder = builder or NetlistBuilder(f"binary-pp-{n}")
    a = a or builder.operand("a", n, 2)
    b = b or builder.operand("b", n, 2)
    cols = _columns(2 * n)
    age = 0
    for i in range(n):
        for j in range(n):
            (y,) = builder.add("AND2", a[i], b[j])
            age += 1
            cols[i + j].wires.append(Wire(y, builder.range_of(y), i, age))
    return builder, cols


def build_partial_products_quaternary(n: int, builder: NetlistBuilder | None = None, a=None, b=None):
    """QMUL1 partial products: product digit to column i + j, carry digit to i + j + 1.

    Product digits of row i form line i, carry digits line n + i.
    """
    if n < 1:
        raise ValueError("width must be >= 1")
    builder = builder or NetlistBuilder(f"quaternary-pp-{n}")
    a = a or builder.operand("a", n, 4)
    b = b or builder.operand("b", n, 4)
    cols = _columns(2 * n)
    age = 0
    for i in range(n):
        for j in range(n):
            qm, qc = builder.add("QMUL1", a[i], b[j])
            cols[i + j].wires.append(Wire(qm, builder.range_of(qm), i, age + 1))
            cols[i + j + 1].wires.append(Wire(qc, builder.range_of(qc), n + i, age + 2))
            age += 2
    return builder, cols


@dataclass
class Generated:
    netlist: Netlist
    plan: ReductionPlan
    reduction_bill: dict
    cpa_bill: dict


def _bill_of_steps(steps):
    from .bill import BillOfCells

    return BillOfCells(s.cell for s in steps)


def _finish(plan):
    tree = [s for st in plan.stages if st.name != "cpa" for s in st.steps]
    cpa = [s for st in plan.stages if st.name == "cpa" for s in st.steps]
    return _bill_of_steps(tree), _bill_of_steps(cpa)


def _binary_core(builder, a_bits, b_bits, policy):
    n = len(a_bits)
    _, cols = build_partial_products_binary(n, builder, a_bits, b_bits)
    plan, rows = compress_columns(builder, cols, 2, policy, width=2 * n)
    outs = build_cpa(builder, rows, 2, 2 * n, plan)
    return plan, outs


def generate_binary_multiplier(n: int, policy: str = "wallace") -> Generated:
    builder = NetlistBuilder(f"binary-{policy}-{n}x{n}")
    a = builder.operand("a", n, 2)
    b = builder.operand("b", n, 2)
    plan, outs = _binary_core(builder, a, b, policy)
    return Generated(builder.build(outs, 2, "mul"), plan, *_finish(plan))


def build_binary_multiplier(n: int, policy: str = "wallace") -> Netlist:
    return generate_binary_multiplier(n, policy).netlist


def generate_quaternary_direct(n: int, policy: str = "wallace") -> Generated:
    builder = NetlistBuilder(f"quat-direct-{policy}-{n}x{n}")
    _, cols = build_partial_products_quaternary(n, builder)
    plan, rows = compress_columns(builder, cols, 4, policy, width=2 * n)
    outs = build_cpa(builder, rows, 4, 2 * n, plan)
    return Generated(builder.build(outs, 4, "mul"), plan, *_finish(plan))


def build_quaternary_direct(n: int, policy: str = "wallace") -> Netlist:
    return generate_quaternary_direct(n, policy).netlist


def generate_quaternary_hybrid(n: int, policy: str = "wallace") -> Generated:
    """Quaternary operands decoded to bits, a binary 2n x 2n core, outputs re-encoded."""
    if n < 1:
        raise ValueError("width must be >= 1")
    builder = NetlistBuilder(f"quat-hybrid-{policy}-{n}x{n}")
    a = builder.operand("a", n, 4)
    b = builder.operand("b", n, 4)

    def decode(digits):
        bits = []
        for q in digits:
            x1, x0 = builder.add("DEC_Q2B", q)
            bits += [x0, x1]
        return bits

    a_bits, b_bits = decode(a), decode(b)
    plan, bits = _binary_core(builder, a_bits, b_bits, policy)
    outs = [builder.add("ENC_B2Q", bits[2 * k + 1], bits[2 * k])[0] for k in range(2 * n)]
    return Generated(builder.build(outs, 4, "mul"), plan, *_finish(plan))


def build_quaternary_hybrid(n: int, policy: str = "wallace") -> Netlist:
    return generate_quaternary_hybrid(n, policy).netlist


def build_ripple_adder_quaternary(n: int) -> Netlist:
    """n-digit quaternary adder: a Q331 per digit, the first with carry-in tied to 0.

    The final binary carry is the most significant of the n + 1 output digits.
    """
    if n < 1:
        raise ValueError("width must be >= 1")
    builder = NetlistBuilder(f"quat-ripple-adder-{n}")
    a = builder.operand("a", n, 4)
    b = builder.operand("b", n, 4)
    carry = builder.const(0)
    outs = []
    for i in range(n):
        s, carry = builder.add("Q331", a[i], b[i], carry)
        outs.append(s)
    outs.append(carry)
    return builder.build(outs, 4, "add")


ARCHITECTURES = ("binary-wallace", "binary-dadda", "quat-direct", "quat-hybrid", "quat-ripple-adder")


def build_architecture(arch: str, width: int, policy: str | None = None) -> Netlist:
    if arch == "binary-wallace":
        return build_binary_multiplier(width, policy or "wallace")
    if arch == "binary-dadda":
        return build_binary_multiplier(width, policy or "dadda")
    if arch == "quat-direct":
        return build_quaternary_direct(width, policy or "wallace")
    if arch == "quat-hybrid":
        return build_quaternary_hybrid(width, policy or "wallace")
    if arch == "quat-ripple-adder":
        return build_ripple_adder_quaternary(width)
    raise ValueError(f"unknown architecture {arch!r}; expected one of {', '.join(ARCHITECTURES)}")
