"""Digit values, value ranges and radix conversion.

A wire in this library carries one digit. Its :class:`ValueRange` is the
largest logical value it may take: 1 for a binary wire, 2 for a ternary one
and 3 for a quaternary one. Binary wires are modelled as {0, 1}; the physical
encoding of a binary signal on a quaternary rail (levels 0 and 3) is below
this abstraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

SUPPORTED_RADICES = (2, 4)


class RangeViolation(ValueError):
    """A digit exceeded the range declared for its port or net."""


class DigitOverflow(ValueError):
    """An integer does not fit in the requested number of digits."""


@dataclass(frozen=True, order=True)
class ValueRange:
    max_value: int

    def __post_init__(self):
        if not 1 <= self.max_value <= 3:
            raise ValueError(f"max_value must be in 1..3, got {self.max_value}")

    def __contains__(self, value: int) -> bool:
        return 0 <= value <= self.max_value

    def __int__(self) -> int:
        return self.max_value

    @property
    def levels(self) -> int:
        return self.max_value + 1

    def __str__(self) -> str:
        return str(self.max_value)


BINARY = ValueRange(1)
TERNARY = ValueRange(2)
QUATERNARY = ValueRange(3)


def as_range(r: ValueRange | int) -> ValueRange:
    return r if isinstance(r, ValueRange) else ValueRange(int(r))


@dataclass(frozen=True)
class DigitValue:
    value: int
    range: ValueRange

    def __post_init__(self):
        if self.value not in self.range:
            raise RangeViolation(f"digit {self.value} outside 0..{self.range.max_value}")


@dataclass(frozen=True)
class DigitVector:
    """Digits least-significant first."""

    digits: tuple[int, ...]
    radix: int

    def __post_init__(self):
        if self.radix not in SUPPORTED_RADICES:
            raise ValueError(f"unsupported radix {self.radix}")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.radix:
                raise RangeViolation(f"digit {d} not valid in radix {self.radix}")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __int__(self) -> int:
        return from_digits(self)


def to_digits(n: int, radix: int, width: int) -> DigitVector:
    if radix not in SUPPORTED_RADICES:
        raise ValueError(f"unsupported radix {radix}")
    if n < 0:
        raise ValueError("negative values are not supported")
    if n >= radix**width:
        raise DigitOverflow(f"{n} does not fit in {width} radix-{radix} digits")
    digits = []
    for _ in range(width):
        n, d = divmod(n, radix)
        digits.append(d)
    return DigitVector(tuple(digits), radix)


def from_digits(v: DigitVector | Sequence[int], radix: int | None = None) -> int:
    if isinstance(v, DigitVector):
        digits, radix = v.digits, v.radix
    else:
        digits = v
        if radix is None:
            raise TypeError("radix is required for a bare digit sequence")
    total = 0
    for d in reversed(digits):
        total = total * radix + d
    return total


def range_of_sum(
    inputs: Iterable[ValueRange | int], radix: int = 4
) -> tuple[ValueRange, ValueRange | None]:
    """Ranges of the sum and carry digits produced by adding ``inputs``.

    The carry range is ``None`` when the inputs can never produce a carry.

    >>> range_of_sum([3, 3, 2])
    (ValueRange(max_value=3), ValueRange(max_value=2))
    """
    ranges = [as_range(r) for r in inputs]
    if not 1 <= len(ranges) <= 3:
        raise ValueError(f"a compressor takes 1 to 3 inputs, got {len(ranges)}")
    if radix not in SUPPORTED_RADICES:
        raise ValueError(f"unsupported radix {radix}")
    total = sum(r.max_value for r in ranges)
    if any(r.max_value > radix - 1 for r in ranges):
        raise RangeViolation(f"input range exceeds radix-{radix} digit")
    sum_range = ValueRange(min(total, radix - 1))
    carry = total // radix
    return sum_range, (ValueRange(carry) if carry else None)
