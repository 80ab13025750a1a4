"""Observer-frame clock of a Zeno machine.

Step k lasts ``mu0 * 2**(1 - k)`` seconds, so the first n steps finish at
``mu0 * (2 - 2**(1 - n))`` and all of them at ``2 * mu0``. Everything is an
exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ordinal import (  # noqa: F401  re-exported for convenience
    OMEGA,
    OrdinalBound,
    OrdinalTime,
    Ordering,
    bound_add,
    ord_add,
    ord_compare,
)

__all__ = [
    "ZenoSchedule",
    "step_duration",
    "wall_time",
    "wall_time_limit",
    "format_seconds",
    "parse_seconds",
]


@dataclass(frozen=True)
class ZenoSchedule:
    initial_duration: Fraction = Fraction(1)

    def __post_init__(self):
        mu0 = Fraction(self.initial_duration)
        if mu0 <= 0:
            raise ValueError("initial step duration must be positive")
        object.__setattr__(self, "initial_duration", mu0)

    @property
    def ratio(self) -> Fraction:
        return Fraction(1, 2)


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def step_duration(k: int, s: ZenoSchedule = ZenoSchedule()) -> Fraction:
    """Duration of the k-th step (k counts from 1)."""
    if k < 1:
        raise ValueError("steps are numbered from 1")
    return s.initial_duration * _pow2(1 - k)


def wall_time(n: int, s: ZenoSchedule = ZenoSchedule()) -> Fraction:
    """Observer time elapsed once n steps have completed."""
    if n < 0:
        raise ValueError("step count must be non-negative")
    if n == 0:
        return Fraction(0)
    return s.initial_duration * (2 - _pow2(1 - n))


def wall_time_limit(s: ZenoSchedule = ZenoSchedule()) -> Fraction:
    return 2 * s.initial_duration


def format_seconds(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_seconds(text: str) -> Fraction:
    return Fraction(text.strip())
