from __future__ import annotations

from collections import Counter

# print order for bills; unknown names sort after these, alphabetically
CELL_ORDER = (
    "AND2", "FA", "HA", "XOR2", "DEC_Q2B", "ENC_B2Q",
    "QMUL1", "Q331", "Q332", "QH32", "QH31", "QINV",
)


def cell_sort_key(name: str):
    try:
        return (CELL_ORDER.index(name), name)
    except ValueError:
        return (len(CELL_ORDER), name)


class BillOfCells(Counter):
    """Multiset of cell names, the unit of cost accounting."""

    def items_ordered(self):
        return sorted(((k, v) for k, v in self.items() if v > 0), key=lambda kv: cell_sort_key(kv[0]))

    def __add__(self, other):
        return BillOfCells(Counter.__add__(self, other))

    def __sub__(self, other):
        return BillOfCells(Counter.__sub__(self, other))

    def __str__(self) -> str:
        return " ".join(f"{k}:{v}" for k, v in self.items_ordered())

    def __repr__(self) -> str:
        return f"BillOfCells({dict(self.items_ordered())})"
