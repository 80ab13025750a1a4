"""Evaluating ``if R(f(x), k)`` tests.

``f`` is looked up by name in an :class:`OracleTable`. A name may refer to a
real machine, which runs on ``x`` one transition at a time, or to a
:class:`Stub` with a fixed answer. Stubs are how a machine that is not a
Turing machine at all (the limit-assisted decider, say) gets plugged in.
The machine's answer is whatever is left on its tape 2 when it halts.

Evaluations are immutable: ``advance`` returns a new evaluation. The
dovetailing scheduler can then snapshot them along with everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

from .machine import (
    Configuration,
    MachineSpec,
    OracleIf,
    StepOutcome,
    UnresolvedOracle,
    initial_config,
    relation_holds,
    step,
)

__all__ = ["UnknownMachine", "Stub", "MachineEvaluation", "StubEvaluation", "OracleTable"]


class UnknownMachine(KeyError):
    pass


@dataclass(frozen=True)
class Stub:
    """Fixed oracle answer. ``output=None`` never resolves."""

    output: Optional[str]
    delay: int = 0


@dataclass(frozen=True)
class MachineEvaluation:
    test: OracleIf
    machine: MachineSpec
    config: Configuration
    steps: int = 0
    output: Optional[str] = None

    @property
    def result(self) -> Optional[bool]:
        if self.output is None:
            return None
        return relation_holds(self.test.relation, self.output, self.test.threshold)

    def advance(self, table: OracleTable) -> MachineEvaluation:
        if self.output is not None:
            return self
        c, outcome = step(self.config, self.machine, table)
        if outcome is not StepOutcome.CONTINUED:
            return replace(self, output="".join(c.tape2.span()))
        return replace(self, config=c, steps=self.steps + 1)


@dataclass(frozen=True)
class StubEvaluation:
    test: OracleIf
    stub: Stub
    steps: int = 0

    @property
    def output(self) -> Optional[str]:
        if self.stub.output is None or self.steps < self.stub.delay:
            return None
        return self.stub.output

    @property
    def result(self) -> Optional[bool]:
        out = self.output
        return None if out is None else relation_holds(self.test.relation, out, self.test.threshold)

    def advance(self, table: OracleTable) -> StubEvaluation:
        if self.output is not None:
            return self
        return replace(self, steps=self.steps + 1)


class OracleTable:
    """Named oracle machines and stubs, callable as a tm-core oracle.

    Calling the table decides a test outright, spending at most ``fuel``
    transitions, and raises :class:`UnresolvedOracle` otherwise.
    """

    def __init__(self, machines: Mapping[str, MachineSpec] = None,
                 stubs: Mapping[str, Stub] = None, fuel: int = 10_000):
        self.machines = dict(machines or {})
        self.stubs = dict(stubs or {})
        self.fuel = fuel

    def __contains__(self, name: str) -> bool:
        return name in self.machines or name in self.stubs

    def names(self) -> set:
        return set(self.machines) | set(self.stubs)

    def start(self, test: OracleIf, x: Sequence[str]):
        name = test.oracle_machine
        if name in self.stubs:
            return StubEvaluation(test, self.stubs[name])
        if name in self.machines:
            f = self.machines[name]
            return MachineEvaluation(test, f, initial_config(f, tuple(x)))
        raise UnknownMachine(name)

    def __call__(self, test: OracleIf, x: Sequence[str]) -> bool:
        ev = self.start(test, x)
        if ev.result is None:
            for _ in range(self.fuel + 1):
                ev = ev.advance(self)
                if ev.result is not None:
                    break
        if ev.result is None:
            raise UnresolvedOracle(f"{test.oracle_machine} did not answer within {self.fuel} steps")
        return ev.result
