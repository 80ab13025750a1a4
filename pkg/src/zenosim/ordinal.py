"""Ordinals of the form w*a + n and the O(w)-style running-time bounds built on them.

Only the fragment below w^2 is modelled. Every value has exactly one
representation ``(omega_coeff, finite_part)`` so structural equality is
ordinal equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering

__all__ = [
    "Ordering",
    "OrdinalTime",
    "OrdinalBound",
    "OMEGA",
    "ZERO",
    "ord_add",
    "ord_compare",
    "bound_add",
    "parse_ordinal",
    "big_o",
]


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


@total_ordering
@dataclass(frozen=True)
class OrdinalTime:
    """The ordinal ``w*omega_coeff + finite_part``."""

    omega_coeff: int = 0
    finite_part: int = 0

    def __post_init__(self):
        if self.omega_coeff < 0 or self.finite_part < 0:
            raise ValueError("ordinal components must be natural numbers")

    @classmethod
    def finite(cls, n: int) -> OrdinalTime:
        return cls(0, n)

    @property
    def is_finite(self) -> bool:
        return self.omega_coeff == 0

    def __add__(self, other):
        if isinstance(other, int):
            other = OrdinalTime.finite(other)
        if not isinstance(other, OrdinalTime):
            return NotImplemented
        return ord_add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return ord_add(OrdinalTime.finite(other), self)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int):
            other = OrdinalTime.finite(other)
        if not isinstance(other, OrdinalTime):
            return NotImplemented
        return ord_compare(self, other) is Ordering.LT

    def successor(self) -> OrdinalTime:
        return OrdinalTime(self.omega_coeff, self.finite_part + 1)

    def __str__(self):
        if self.omega_coeff == 0:
            return str(self.finite_part)
        return f"w*{self.omega_coeff}+{self.finite_part}"

    def __repr__(self):
        return f"OrdinalTime({self})"


ZERO = OrdinalTime(0, 0)
OMEGA = OrdinalTime(1, 0)

_ORDINAL_RE = re.compile(r"^\s*(?:w\*(\d+)\+(\d+)|(\d+))\s*$")


def parse_ordinal(text: str) -> OrdinalTime:
    """Inverse of ``str(OrdinalTime)``: accepts ``n`` or ``w*a+n``."""
    match = _ORDINAL_RE.match(text)
    if not match:
        raise ValueError(f"not an ordinal: {text!r}")
    if match.group(3) is not None:
        return OrdinalTime.finite(int(match.group(3)))
    return OrdinalTime(int(match.group(1)), int(match.group(2)))


def ord_add(x: OrdinalTime, y: OrdinalTime) -> OrdinalTime:
    # a finite tail on the left is absorbed by any infinite right operand
    if y.omega_coeff >= 1:
        return OrdinalTime(x.omega_coeff + y.omega_coeff, y.finite_part)
    return OrdinalTime(x.omega_coeff, x.finite_part + y.finite_part)


def ord_compare(x: OrdinalTime, y: OrdinalTime) -> Ordering:
    kx = (x.omega_coeff, x.finite_part)
    ky = (y.omega_coeff, y.finite_part)
    if kx < ky:
        return Ordering.LT
    if kx > ky:
        return Ordering.GT
    return Ordering.EQ


@dataclass(frozen=True)
class OrdinalBound:
    """A running-time class: necessarily ``necessary`` steps, plus possibly
    some finite extra when ``slack`` is set."""

    necessary: OrdinalTime
    slack: bool = True

    def __add__(self, other):
        if not isinstance(other, OrdinalBound):
            return NotImplemented
        return bound_add(self, other)

    def __str__(self):
        return f"O({self.necessary})" if self.slack else str(self.necessary)


def big_o(t: OrdinalTime) -> OrdinalBound:
    return OrdinalBound(t, True)


def bound_add(p: OrdinalBound, q: OrdinalBound) -> OrdinalBound:
    return OrdinalBound(ord_add(p.necessary, q.necessary), p.slack or q.slack)
