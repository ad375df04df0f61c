import json
import random

import numpy as np
import pytest

from mvlmul.mvl import BINARY, QUATERNARY, RangeViolation, to_digits
from mvlmul.netlist import (
    Driver,
    Instance,
    Net,
    Netlist,
    NetlistBuilder,
    bill_of_cells,
    evaluate,
    from_dict,
    from_json,
    simulate,
    to_dict,
    to_json,
    validate,
)

from conftest import built


def single(cell, *operands):
    b = NetlistBuilder(cell.lower())
    ins = [b.operand(name, 1, radix)[0] for name, radix in operands]
    outs = b.add(cell, *ins)
    return b.build(outs, operands[0][1], "mul")


def kinds(n):
    return {v.kind for v in validate(n)}


def test_empty_netlist_is_valid_and_costs_nothing():
    n = Netlist()
    assert validate(n) == []
    assert bill_of_cells(n) == {}


def test_single_and_and_qmul1():
    assert evaluate(single("AND2", ("a", 2), ("b", 2)), 1, 1) == (1,)
    assert evaluate(single("QMUL1", ("a", 4), ("b", 4)), 3, 3) == (1, 2)


def test_wallace_8x8_evaluate_255_squared():
    n = built("binary-wallace", 8)
    assert evaluate(n, 255, 255) == to_digits(65025, 2, 16).digits


def test_quaternary_net_into_binary_port_is_range_violation():
    b = NetlistBuilder()
    q = b.input("q", QUATERNARY)
    x = b.input("x", 1)
    y = b.input("y", 1)
    b.add("FA", q, x, y)
    problems = validate(b.build([], 2))
    assert [(p.kind, p.where) for p in problems] == [("range", "u0.a")]


def test_multiple_drivers():
    b = NetlistBuilder()
    x, y = b.input("x", 1), b.input("y", 1)
    (s,) = b.add("AND2", x, y)
    n = b.build([s], 2)
    clash = Instance("u9", "AND2", {"a": x, "b": y, "y": s})
    n2 = Netlist(n.nets.values(), list(n.instances) + [clash], n.inputs, n.outputs)
    assert "multiple-drivers" in kinds(n2)


def test_structural_violations():
    inp = Driver("input")
    nets = [Net("x", QUATERNARY, inp), Net("y", QUATERNARY, Driver("cell", "u0", "qm"))]
    bad_cell = Netlist(nets, [Instance("u0", "NOPE", {})], ["x"], ["y"])
    assert "unknown-cell" in kinds(bad_cell)
    unbound = Netlist(nets, [Instance("u0", "QMUL1", {"a": "x", "qm": "y"})], ["x"], ["y"])
    assert "unbound-port" in kinds(unbound)
    missing = Netlist(nets, [Instance("u0", "QMUL1", {"a": "x", "b": "zz", "qm": "y", "qc": "c"})], ["x"], ["y"])
    assert "unknown-net" in kinds(missing)
    undriven = Netlist([Net("x", QUATERNARY, inp)], [], [], ["x"])
    assert "undriven" in kinds(undriven)


def test_cycle_detected():
    b1 = Driver("cell", "u0", "y")
    b2 = Driver("cell", "u1", "y")
    nets = [Net("p", BINARY, b1), Net("q", BINARY, b2)]
    insts = [Instance("u0", "AND2", {"a": "q", "b": "q", "y": "p"}),
             Instance("u1", "AND2", {"a": "p", "b": "p", "y": "q"})]
    n = Netlist(nets, insts, [], ["p"])
    assert kinds(n) == {"cycle"}
    with pytest.raises(ValueError):
        n.schedule


def test_simulate_rejects_out_of_range_input():
    n = single("AND2", ("a", 2), ("b", 2))
    with pytest.raises(RangeViolation, match="a0"):
        simulate(n, {"a0": np.array([2]), "b0": np.array([1])})


def test_narrowed_output_net_is_range_violation():
    # QMUL1.qc reaches 2 (3*3 = 21 base 4); declaring its net binary must be rejected
    n = single("QMUL1", ("a", 4), ("b", 4))
    d = to_dict(n)
    for net in d["nets"]:
        if net["driver"].get("port") == "qc":
            net["range"] = 1
    narrowed = from_dict(d)
    assert "range" in kinds(narrowed)


def test_batched_matches_scalar_evaluation(rng):
    n = built("quat-direct", 3)
    a = rng.integers(0, 64, 200)
    b = rng.integers(0, 64, 200)
    inputs = {}
    for op, v in zip(n.operands, (a, b)):
        for i, nid in enumerate(op.nets):
            inputs[nid] = (v // 4**i) % 4
    out = simulate(n, inputs)
    for k in range(0, 200, 37):
        assert tuple(int(out[o][k]) for o in n.outputs) == evaluate(n, int(a[k]), int(b[k]))


def test_json_round_trip_is_lossless():
    n = built("quat-hybrid", 2)
    text = to_json(n)
    back = from_json(text)
    assert to_json(back) == text
    assert bill_of_cells(back) == bill_of_cells(n)
    d = json.loads(text)
    assert list(d) == ["inputs", "outputs", "instances", "nets", "meta"]
    for a in range(16):
        assert evaluate(back, a, 15 - a) == evaluate(n, a, 15 - a)


def test_json_constant_driver():
    d = to_dict(built("quat-ripple-adder", 2))
    assert {"id": "const0", "range": 1, "driver": {"const": 0}} in d["nets"]
    assert from_dict(d).nets["const0"].driver == Driver("const", value=0)


def test_bill_invariant_under_instance_reordering():
    n = built("binary-dadda", 4)
    insts = list(n.instances)
    random.Random(7).shuffle(insts)
    shuffled = Netlist(n.nets.values(), insts, n.inputs, n.outputs, n.operands, n.output_radix, n.function)
    assert bill_of_cells(shuffled) == bill_of_cells(n)
    assert validate(shuffled) == []
    for a, b in [(0, 0), (15, 15), (9, 6)]:
        assert evaluate(shuffled, a, b) == evaluate(n, a, b)


def test_evaluate_argument_checks():
    n = single("AND2", ("a", 2), ("b", 2))
    with pytest.raises(TypeError):
        evaluate(n, 1)
    with pytest.raises(RangeViolation):
        evaluate(n, 2, 0)


def test_builder_const_net_is_shared():
    b = NetlistBuilder()
    assert b.const(0) == b.const(0) == "const0"
    assert b.nets["const0"].driver == Driver("const", value=0)
