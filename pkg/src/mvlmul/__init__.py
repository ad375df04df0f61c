"""Multi-valued logic multiplier generation, verification and transistor costing."""

from .bill import BillOfCells
from .cells import LIBRARY, Cell, eval_cell, get_cell
from .costing import SCHEMES, CostScheme, compare, cost_of_bill, get_scheme, paper_bills
from .generators import (
    build_architecture,
    build_binary_multiplier,
    build_quaternary_direct,
    build_quaternary_hybrid,
    build_ripple_adder_quaternary,
)
from .mvl import BINARY, QUATERNARY, TERNARY, DigitVector, ValueRange, from_digits, range_of_sum, to_digits
from .netlist import Netlist, NetlistBuilder, bill_of_cells, simulate, validate
from .verify import VerificationResult, exhaustive_verify, sampled_verify

__all__ = [
    "BINARY", "TERNARY", "QUATERNARY", "ValueRange", "DigitVector", "to_digits", "from_digits",
    "range_of_sum", "Cell", "LIBRARY", "get_cell", "eval_cell", "Netlist", "NetlistBuilder",
    "simulate", "validate", "bill_of_cells", "BillOfCells", "build_architecture",
    "build_binary_multiplier", "build_quaternary_direct", "build_quaternary_hybrid",
    "build_ripple_adder_quaternary", "CostScheme", "SCHEMES", "get_scheme", "cost_of_bill",
    "compare", "paper_bills", "VerificationResult", "exhaustive_verify", "sampled_verify",
]
