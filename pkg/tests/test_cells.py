import csv
import itertools
from pathlib import Path

import pytest

from mvlmul.cells import (
    LIBRARY,
    eval_cell,
    decode_q2b,
    encode_b2q,
    enumerate_truth_table,
    get_cell,
    mvl_inverters,
    q331,
    q332,
    qh31,
    qh32,
    qmul1,
    truth_table_csv,
)
from mvlmul.mvl import RangeViolation

GOLDEN = Path(__file__).parent / "golden"


def read_rows(name):
    with open(GOLDEN / name) as f:
        return [{k: int(v) for k, v in row.items()} for row in csv.DictReader(f)]


@pytest.mark.parametrize("cell, inputs, outputs", [
    ("AND2", (1, 1), (1,)),
    ("FA", (1, 1, 1), (1, 1)),
    ("XOR2", (1, 0), (1,)),
    ("HA", (1, 1), (0, 1)),
])
def test_binary_cells(cell, inputs, outputs):
    assert eval_cell(get_cell(cell), inputs) == outputs


@pytest.mark.parametrize("a, b, expected", [(2, 3, (2, 1)), (3, 3, (1, 2)), (0, 3, (0, 0)), (1, 3, (3, 0))])
def test_qmul1_examples(a, b, expected):
    assert qmul1(a, b) == expected


@pytest.mark.parametrize("fn, args, expected", [
    (q332, (3, 3, 2), (0, 2)),
    (q332, (0, 0, 0), (0, 0)),
    (q332, (2, 3, 1), (2, 1)),
    (q331, (3, 3, 1), (3, 1)),
    (q331, (0, 0, 0), (0, 0)),
    (q331, (2, 3, 0), (1, 1)),
    (qh32, (2, 3), (1, 1)),
    (qh32, (0, 0), (0, 0)),
    (qh32, (1, 2), (3, 0)),
    (qh31, (3, 1), (0, 1)),
    (qh31, (3, 0), (3, 0)),
    (qh31, (2, 1), (3, 0)),
])
def test_adder_examples(fn, args, expected):
    assert fn(*args) == expected


def test_decoder_encoder_examples():
    assert decode_q2b(2) == (1, 0)
    assert decode_q2b(1) == (0, 1)
    assert decode_q2b(0) == (0, 0)
    assert encode_b2q(1, 1) == 3
    assert encode_b2q(0, 0) == 0


def test_decode_encode_round_trip():
    for q in range(4):
        assert encode_b2q(*decode_q2b(q)) == q
    for x1, x0 in itertools.product((0, 1), repeat=2):
        assert decode_q2b(encode_b2q(x1, x0)) == (x1, x0)


def test_inverters_examples_and_monotone():
    assert mvl_inverters(0) == (1, 1, 1)
    assert mvl_inverters(2) == (0, 0, 1)
    assert mvl_inverters(3) == (0, 0, 0)
    for q in range(4):
        nqi, iqi, pqi = mvl_inverters(q)
        assert nqi <= iqi <= pqi
    for q in range(3):
        assert all(x >= y for x, y in zip(mvl_inverters(q), mvl_inverters(q + 1)))


def test_published_decoder_table():
    # binary levels are printed as 0 and 3; logic 1 is level 3
    for row in read_rows("decoder_published.csv"):
        q = row["q"]
        assert mvl_inverters(q) == tuple(row[k] // 3 for k in ("nqi", "iqi", "pqi"))
        assert decode_q2b(q) == (row["x1"] // 3, row["x0"] // 3)
        assert encode_b2q(row["x1"] // 3, row["x0"] // 3) == q


def test_published_qmul1_table_and_erratum():
    rows = read_rows("qmul1_published.csv")
    assert len(rows) == 16
    for row in rows:
        a, b = row["a"], row["b"]
        printed = (row["qm"], row["qc"])
        if a in (2, 3):
            assert qmul1(a, b) == printed
        elif a == 1:
            # the printed rows hold a + b, not a * b
            assert printed == ((a + b) % 4, (a + b) // 4)
            assert qmul1(a, b) == (b, 0)
        else:
            assert qmul1(a, b) == printed == (0, 0)


@pytest.mark.parametrize("name, rows", [("QMUL1", 16), ("Q332", 48), ("FA", 8), ("Q331", 32),
                                        ("QH32", 12), ("QH31", 8)])
def test_truth_table_sizes(name, rows):
    assert len(enumerate_truth_table(get_cell(name))) == rows


def test_arithmetic_soundness_all_cells():
    weights = {"QMUL1": 4, "Q332": 4, "Q331": 4, "QH32": 4, "QH31": 4, "FA": 2, "HA": 2}
    for name, radix in weights.items():
        for ins, outs in enumerate_truth_table(get_cell(name)):
            low, high = outs
            if name == "QMUL1":
                assert radix * high + low == ins[0] * ins[1]
            else:
                assert radix * high + low == sum(ins)


def test_outputs_within_declared_ranges():
    for cell in LIBRARY.values():
        for _, outs in enumerate_truth_table(cell):
            for port, v in zip(cell.outputs, outs):
                assert 0 <= v <= port.range.max_value


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_golden_truth_tables(name):
    expected = (GOLDEN / f"{name.lower()}.csv").read_text()
    assert truth_table_csv(get_cell(name)) == expected


def test_out_of_range_input_names_port():
    with pytest.raises(RangeViolation, match=r"Q331\.cin"):
        q331(0, 0, 2)
    with pytest.raises(RangeViolation, match=r"QH32\.a"):
        qh32(3, 0)


def test_wrong_arity_and_unknown_cell():
    with pytest.raises(TypeError):
        eval_cell(get_cell("FA"), (1, 1))
    with pytest.raises(KeyError):
        get_cell("Q321")


def test_luts_agree_with_truth():
    for cell in LIBRARY.values():
        for ins, outs in enumerate_truth_table(cell):
            assert tuple(int(t[ins]) for t in cell.luts) == outs
