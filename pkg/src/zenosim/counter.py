"""Tape-backed counter holding 1, 1/2, 1/4, ... in base 2.

Digits are written most-significant first: the leftmost digit is the 2**0
place, the next one 2**-1, and so on, so 1/2 is ``01`` and 1/4 is ``001``.
Halving therefore shifts the whole number one cell to the right. Each new
value is appended to the history after a blank rather than overwriting the
old one.

The value after w halvings cannot be reached by stepping, so it is produced
by the explicit :func:`take_limit`. At the limit the infinitely many zeros
collapse to the single digit ``0``. Halving past the limit leaves that digit
alone, which is what lets a machine notice it has passed w: the w-th and
(w+1)-th results compare equal.

Digit strings are kept run-length encoded, so a counter halved 10**5 times
costs O(1) per halving rather than O(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional

from .ordinal import OMEGA, OrdinalTime, ZERO, parse_ordinal

__all__ = [
    "LimitReached",
    "CounterComparison",
    "HalvingCounter",
    "SEPARATOR",
    "counter_init",
    "halve",
    "last_digit",
    "take_limit",
    "halve_past_limit",
    "compare_counters",
    "value",
    "counter_after",
    "parse_counter",
]

SEPARATOR = "b"


class LimitReached(ValueError):
    pass


class CounterComparison(Enum):
    EQUAL = "Equal"
    UNEQUAL = "Unequal"


Runs = tuple  # ((digit, count), ...), adjacent digits always differ


@dataclass(frozen=True, eq=False)
class HalvingCounter:
    runs: Runs
    divisions: OrdinalTime
    at_limit: bool
    previous: Optional[HalvingCounter] = None

    @property
    def current(self) -> str:
        return "".join(d * n for d, n in self.runs)

    def __len__(self):
        return sum(n for _, n in self.runs)

    def ones(self) -> int:
        return sum(n for d, n in self.runs if d == "1")

    def segments(self) -> Iterator[Runs]:
        """History segments, oldest first."""
        chain = []
        c = self
        while c is not None:
            chain.append(c.runs)
            c = c.previous
        return reversed(chain)

    def history_tape(self) -> str:
        return SEPARATOR.join("".join(d * n for d, n in seg) for seg in self.segments())

    def separators(self) -> int:
        n = -1
        c = self
        while c is not None:
            n += 1
            c = c.previous
        return n

    def __eq__(self, other):
        if not isinstance(other, HalvingCounter):
            return NotImplemented
        return (self.runs, self.divisions, self.at_limit) == (other.runs, other.divisions, other.at_limit)

    def __hash__(self):
        return hash((self.runs, self.divisions, self.at_limit))

    def __str__(self):
        return f"{self.current}@{self.divisions}"

    def __repr__(self):
        return f"HalvingCounter({self})"


def counter_init() -> HalvingCounter:
    return HalvingCounter((("1", 1),), ZERO, False)


def _shift_right(runs: Runs) -> Runs:
    d, n = runs[0]
    if d == "0":
        return (("0", n + 1),) + runs[1:]
    return (("0", 1),) + runs


def halve(c: HalvingCounter) -> HalvingCounter:
    if c.at_limit:
        raise LimitReached("counter is already at its limit; use halve_past_limit")
    return HalvingCounter(_shift_right(c.runs), c.divisions.successor(), False, c)


def last_digit(c: HalvingCounter) -> int:
    return int(c.runs[-1][0])


def take_limit(c: HalvingCounter) -> HalvingCounter:
    if c.at_limit:
        raise LimitReached("counter is already at its limit")
    return HalvingCounter((("0", 1),), OMEGA, True, c)


def halve_past_limit(c: HalvingCounter) -> HalvingCounter:
    if not c.at_limit:
        raise ValueError("counter has not reached its limit yet")
    return HalvingCounter(c.runs, c.divisions.successor(), True, c)


def compare_counters(a: HalvingCounter, b: HalvingCounter) -> CounterComparison:
    """Digit-by-digit comparison of the current values, leftmost digit first."""
    # equal run-length encodings <=> equal digit strings
    return CounterComparison.EQUAL if a.runs == b.runs else CounterComparison.UNEQUAL


def value(c: HalvingCounter) -> Fraction:
    # the digits read as an integer over 2**(len - 1); shifts keep this O(len)
    numerator = 0
    for d, n in c.runs:
        numerator <<= n
        if d == "1":
            numerator |= (1 << n) - 1
    return Fraction(numerator, 1 << (len(c) - 1))


def counter_after(n: int) -> HalvingCounter:
    c = counter_init()
    for _ in range(n):
        c = halve(c)
    return c


def parse_counter(text: str) -> tuple:
    """Split a ``digits@ordinal`` rendering into ``(digits, OrdinalTime)``."""
    digits, sep, ordinal = text.partition("@")
    if not sep or not digits or set(digits) - {"0", "1"}:
        raise ValueError(f"not a counter rendering: {text!r}")
    return digits, parse_ordinal(ordinal)
