"""Halting check on a Zeno machine: one program step, then one halving, repeated.

Each round runs a single transition of the program. If the program has
halted the loop ends before halving. Otherwise the counter is halved. After
``fuel`` rounds without a halt, the run either stops as :class:`Exhausted`
(a plain Turing machine that ran out of fuel) or, in limit-stage mode,
takes the counter to its limit and answers 0. The limit stage stands in for
the w-th round, which finite hardware never reaches.

Round bookkeeping: a machine that halts after n transitions has a counter
halved ``max(n - 1, 0)`` times, because the halving is skipped on the round
where the halt is noticed. The observer clock reads ``wall_time(n)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .counter import HalvingCounter, counter_init, halve, take_limit
from .machine import Configuration, MachineSpec, StepOutcome, initial_config, step
from .ordinal import OMEGA, OrdinalTime
from .zenotime import ZenoSchedule, format_seconds, wall_time, wall_time_limit

__all__ = ["VerdictMode", "HaltVerdict", "Exhausted", "zeno_halt_check", "verdict_total"]


class VerdictMode(Enum):
    CONCRETE = "Concrete"
    SYMBOLIC_LIMIT = "SymbolicLimit"


@dataclass(frozen=True)
class HaltVerdict:
    bit: int
    mode: VerdictMode
    steps_used: OrdinalTime
    counter: HalvingCounter
    wall_clock: Fraction
    outcome: Optional[StepOutcome] = None

    def __post_init__(self):
        if self.bit == 1:
            ok = self.mode is VerdictMode.CONCRETE and self.steps_used.is_finite
        elif self.bit == 0:
            ok = self.mode is VerdictMode.SYMBOLIC_LIMIT and self.counter.at_limit
        else:
            ok = False
        if not ok:
            raise ValueError(f"inconsistent verdict: bit={self.bit} mode={self.mode.value}")

    def to_json(self) -> dict:
        return {
            "bit": self.bit,
            "mode": self.mode.value,
            "steps": str(self.steps_used),
            "counter": str(self.counter),
            "wall_clock": format_seconds(self.wall_clock),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class Exhausted:
    """Fuel ran out and no limit stage was requested. Not a verdict."""

    config: Configuration
    counter: HalvingCounter


def zeno_halt_check(
    m: MachineSpec,
    input: Sequence[str] = (),
    fuel: int = 10_000,
    limit_stage: bool = True,
    schedule: ZenoSchedule = ZenoSchedule(),
    oracle=None,
) -> Union[HaltVerdict, Exhausted]:
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    c = initial_config(m, input)
    counter = counter_init()
    if _halts_now(c, m):
        return _halted(c, m, counter, schedule)
    for _ in range(fuel):
        c, _ = step(c, m, oracle)
        if _halts_now(c, m):
            return _halted(c, m, counter, schedule)
        counter = halve(counter)
    if not limit_stage:
        return Exhausted(c, counter)
    return HaltVerdict(0, VerdictMode.SYMBOLIC_LIMIT, OMEGA, take_limit(counter),
                       wall_time_limit(schedule))


def _halted(c: Configuration, m: MachineSpec, counter: HalvingCounter, schedule: ZenoSchedule) -> HaltVerdict:
    n = c.steps.finite_part
    outcome = StepOutcome.ACCEPT_HALT if c.state in m.accepting else StepOutcome.STUCK_HALT
    return HaltVerdict(1, VerdictMode.CONCRETE, OrdinalTime.finite(n), counter,
                       wall_time(n, schedule), outcome)


def _halts_now(c: Configuration, m: MachineSpec) -> bool:
    if c.state in m.accepting:
        return True
    if m.oracle_at(c.state) is not None:
        return False
    return m.action(c.state, c.tape1.read(), c.tape2.read()) is None


def verdict_total(v) -> bool:
    """Every non-exhausted result carries a definite bit."""
    if isinstance(v, Exhausted):
        return False
    return v.bit in (0, 1) and (v.bit == 1 or v.counter.at_limit)
