import functools

import numpy as np
import pytest

from mvlmul import generators


@functools.lru_cache(maxsize=None)
def built(arch: str, width: int, policy: str | None = None):
    return generators.build_architecture(arch, width, policy)


@functools.lru_cache(maxsize=None)
def generated(kind: str, width: int, policy: str = "wallace"):
    fn = {
        "binary": generators.generate_binary_multiplier,
        "direct": generators.generate_quaternary_direct,
        "hybrid": generators.generate_quaternary_hybrid,
    }[kind]
    return fn(width, policy)


def operand_inputs(netlist, *values):
    """Primary-input arrays for operand value arrays, least significant digit first."""
    inputs = {}
    for op, v in zip(netlist.operands, values):
        v = np.asarray(v, dtype=np.int64)
        for i, nid in enumerate(op.nets):
            inputs[nid] = ((v // op.radix**i) % op.radix).astype(np.int8)
    return inputs


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
