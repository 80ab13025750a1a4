"""Two-tape deterministic Turing machines.

A machine is the usual 7-tuple (states, tape alphabet, blank, input alphabet,
transition function, start state, accepting states) with a *partial*
transition function over pairs of read symbols. Both tapes are bi-infinite
and stored sparsely; a cell that was never written (or was written with the
blank) is simply absent.

Conventions fixed here:

* input is written on tape 1 starting at cell 0; both heads start at cell 0;
* within one step both tapes are written first, then both heads move;
* a non-accepting state with no applicable rule is a *stuck* halt, the
  only form of rejection.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .ordinal import OrdinalTime, ZERO

__all__ = [
    "MachineError",
    "BlankInInput",
    "RuleFromAccepting",
    "UnknownSymbol",
    "UnknownState",
    "DuplicateRule",
    "OracleConflict",
    "InputSymbolNotInSigma",
    "UnresolvedOracle",
    "MOVES",
    "RELATIONS",
    "Action",
    "OracleIf",
    "MachineSpec",
    "Tape",
    "Configuration",
    "StepOutcome",
    "RunResult",
    "validate_spec",
    "initial_config",
    "step",
    "run",
    "relation_holds",
]


class MachineError(ValueError):
    """Base class for invalid machines and inputs."""


class BlankInInput(MachineError):
    pass


class RuleFromAccepting(MachineError):
    pass


class UnknownSymbol(MachineError):
    pass


class UnknownState(MachineError):
    pass


class DuplicateRule(MachineError):
    pass


class OracleConflict(MachineError):
    """A state carries both an oracle test and ordinary rules, or two oracle tests."""


class InputSymbolNotInSigma(MachineError):
    pass


class UnresolvedOracle(RuntimeError):
    """An oracle test was reached and nothing could decide it."""


MOVES = {"L": -1, "N": 0, "R": 1}
RELATIONS = ("==", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Action:
    state: str
    write1: str
    write2: str
    move1: str
    move2: str


@dataclass(frozen=True)
class OracleIf:
    """``if R(f(x), k) then goto true_state else goto false_state``.

    ``f`` is another machine referred to by name; ``x`` is whatever sits on
    tape 1 to the left of the head when the test is reached.
    """

    at_state: str
    relation: str
    oracle_machine: str
    threshold: str
    true_state: str
    false_state: str


def relation_holds(relation: str, output: str, threshold: str) -> bool:
    if relation == "==":
        return output == threshold
    if relation == "<=":
        return output <= threshold
    if relation == ">=":
        return output >= threshold
    if relation == "<":
        return output < threshold
    if relation == ">":
        return output > threshold
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True, eq=True)
class MachineSpec:
    states: frozenset
    alphabet: frozenset
    blank: str
    input_alphabet: frozenset
    start: str
    accepting: frozenset
    rules: Mapping
    oracle_rules: tuple = ()
    name: str = "M"

    def action(self, state: str, read1: str, read2: str) -> Optional[Action]:
        return self.rules.get((state, read1, read2))

    def oracle_at(self, state: str) -> Optional[OracleIf]:
        for o in self.oracle_rules:
            if o.at_state == state:
                return o
        return None

    def __hash__(self):
        return hash((self.name, self.states, self.alphabet, self.blank, self.input_alphabet,
                     self.start, self.accepting, frozenset(self.rules.items()), self.oracle_rules))


def validate_spec(
    states: Iterable[str],
    alphabet: Iterable[str],
    blank: str,
    input_alphabet: Iterable[str],
    start: str,
    accepting: Iterable[str],
    rules: Iterable[tuple],
    oracle_rules: Iterable[OracleIf] = (),
    name: str = "M",
) -> MachineSpec:
    """Check a raw machine description and freeze it into a :class:`MachineSpec`.

    ``rules`` holds 8-tuples ``(state, read1, read2, next, write1, write2, move1, move2)``.
    The blank is added to the alphabet if missing.
    """
    Q = frozenset(states)
    gamma = frozenset(alphabet) | {blank}
    sigma = frozenset(input_alphabet)
    F = frozenset(accepting)
    if not Q:
        raise UnknownState("machine has no states")
    if blank in sigma:
        raise BlankInInput(f"blank {blank!r} is listed as an input symbol")
    for s in sigma:
        if s not in gamma:
            raise UnknownSymbol(f"input symbol {s!r} is not in the alphabet")
    if start not in Q:
        raise UnknownState(f"start state {start!r} is not declared")
    for q in F:
        if q not in Q:
            raise UnknownState(f"accepting state {q!r} is not declared")

    table = {}
    for rule in rules:
        q, r1, r2, q2, w1, w2, m1, m2 = rule
        for st in (q, q2):
            if st not in Q:
                raise UnknownState(f"state {st!r} is not declared")
        if q in F:
            raise RuleFromAccepting(f"rule defined on accepting state {q!r}")
        for sym in (r1, r2, w1, w2):
            if sym not in gamma:
                raise UnknownSymbol(f"symbol {sym!r} is not in the alphabet")
        for mv in (m1, m2):
            if mv not in MOVES:
                raise MachineError(f"move {mv!r} is not one of L, N, R")
        key = (q, r1, r2)
        if key in table:
            raise DuplicateRule(f"two rules for {key}")
        table[key] = Action(q2, w1, w2, m1, m2)

    oracles = tuple(oracle_rules)
    seen = set()
    ruled_states = {k[0] for k in table}
    for o in oracles:
        for st in (o.at_state, o.true_state, o.false_state):
            if st not in Q:
                raise UnknownState(f"state {st!r} is not declared")
        if o.at_state in F:
            raise RuleFromAccepting(f"oracle test on accepting state {o.at_state!r}")
        if o.relation not in RELATIONS:
            raise MachineError(f"unknown relation {o.relation!r}")
        if o.at_state in seen or o.at_state in ruled_states:
            raise OracleConflict(f"state {o.at_state!r} has more than one way to continue")
        seen.add(o.at_state)

    return MachineSpec(Q, gamma, blank, sigma, start, F, table, oracles, name)


class Tape:
    """Sparse bi-infinite tape with a head. Treated as an immutable value."""

    __slots__ = ("_cells", "head", "blank")

    def __init__(self, cells: Optional[Mapping[int, str]] = None, head: int = 0, blank: str = "_"):
        self._cells = {i: s for i, s in (cells or {}).items() if s != blank}
        self.head = head
        self.blank = blank

    def read(self, i: Optional[int] = None) -> str:
        return self._cells.get(self.head if i is None else i, self.blank)

    @property
    def cells(self) -> Mapping[int, str]:
        return dict(self._cells)

    def __len__(self):
        return len(self._cells)

    def span(self) -> tuple:
        """Non-blank contents from leftmost to rightmost written cell."""
        if not self._cells:
            return ()
        lo, hi = min(self._cells), max(self._cells)
        return tuple(self._cells.get(i, self.blank) for i in range(lo, hi + 1))

    def left_of_head(self) -> tuple:
        return tuple(self._cells[i] for i in sorted(self._cells) if i < self.head)

    def __eq__(self, other):
        if not isinstance(other, Tape):
            return NotImplemented
        return self.head == other.head and self.blank == other.blank and self._cells == other._cells

    def __hash__(self):
        return hash((self.head, frozenset(self._cells.items())))

    def __repr__(self):
        return f"Tape(head={self.head}, cells={dict(sorted(self._cells.items()))})"


@dataclass(frozen=True)
class Configuration:
    state: str
    tape1: Tape
    tape2: Tape
    steps: OrdinalTime = ZERO

    def instant(self) -> tuple:
        """Everything except the step count; two configurations with equal
        instants have equal futures."""
        return (self.state, self.tape1, self.tape2)


class StepOutcome(Enum):
    CONTINUED = "continued"
    ACCEPT_HALT = "accept"
    STUCK_HALT = "stuck"


@dataclass(frozen=True)
class RunResult:
    halted: bool
    outcome: StepOutcome
    steps_used: int
    config: Configuration

    @property
    def exhausted(self) -> bool:
        return not self.halted


def initial_config(m: MachineSpec, input: Sequence[str] = ()) -> Configuration:
    for s in input:
        if s not in m.input_alphabet:
            raise InputSymbolNotInSigma(f"input symbol {s!r} is not in the input alphabet")
    tape1 = Tape(dict(enumerate(input)), 0, m.blank)
    return Configuration(m.start, tape1, Tape({}, 0, m.blank), ZERO)


Oracle = Callable[[OracleIf, tuple], bool]


def _resolve(o: OracleIf, x: tuple, oracle: Optional[Oracle]) -> bool:
    if oracle is None:
        raise UnresolvedOracle(f"no oracle supplied for {o.oracle_machine!r}")
    return oracle(o, x)


def step(c: Configuration, m: MachineSpec, oracle: Optional[Oracle] = None):
    """One transition. Returns ``(next_config, outcome)``; halting leaves the
    configuration untouched.

    A state carrying an :class:`OracleIf` consults ``oracle`` and jumps to the
    chosen branch without touching the tapes; that counts as one step.
    """
    if c.state in m.accepting:
        return c, StepOutcome.ACCEPT_HALT
    o = m.oracle_at(c.state) if m.oracle_rules else None
    if o is not None:
        taken = _resolve(o, c.tape1.left_of_head(), oracle)
        nxt = o.true_state if taken else o.false_state
        return replace(c, state=nxt, steps=c.steps.successor()), StepOutcome.CONTINUED
    act = m.rules.get((c.state, c.tape1.read(), c.tape2.read()))
    if act is None:
        return c, StepOutcome.STUCK_HALT
    cells1 = c.tape1.cells
    cells2 = c.tape2.cells
    h1, h2 = _apply(act, m.blank, cells1, c.tape1.head, cells2, c.tape2.head)
    return (
        Configuration(act.state, Tape(cells1, h1, m.blank), Tape(cells2, h2, m.blank), c.steps.successor()),
        StepOutcome.CONTINUED,
    )


def _apply(act: Action, blank: str, cells1: dict, h1: int, cells2: dict, h2: int):
    if act.write1 == blank:
        cells1.pop(h1, None)
    else:
        cells1[h1] = act.write1
    if act.write2 == blank:
        cells2.pop(h2, None)
    else:
        cells2[h2] = act.write2
    return h1 + MOVES[act.move1], h2 + MOVES[act.move2]


def run(m: MachineSpec, input: Sequence[str] = (), fuel: int = 10_000,
        oracle: Optional[Oracle] = None, *, start: Optional[Configuration] = None) -> RunResult:
    """Run for at most ``fuel`` transitions.

    A machine that lands in a halting configuration on its last permitted
    transition is still reported as halted: noticing a halt costs nothing.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    c = start if start is not None else initial_config(m, input)
    # mutable fast path; the public step() is the reference semantics
    state = c.state
    cells1, h1 = c.tape1.cells, c.tape1.head
    cells2, h2 = c.tape2.cells, c.tape2.head
    rules, F, blank = m.rules, m.accepting, m.blank
    used = 0
    outcome = StepOutcome.CONTINUED
    while True:
        if state in F:
            outcome = StepOutcome.ACCEPT_HALT
            break
        o = m.oracle_at(state) if m.oracle_rules else None
        act = None
        if o is None:
            act = rules.get((state, cells1.get(h1, blank), cells2.get(h2, blank)))
            if act is None:
                outcome = StepOutcome.STUCK_HALT
                break
        if used >= fuel:
            break
        if o is not None:
            left = Tape(cells1, h1, blank).left_of_head()
            state = o.true_state if _resolve(o, left, oracle) else o.false_state
        else:
            h1, h2 = _apply(act, blank, cells1, h1, cells2, h2)
            state = act.state
        used += 1
    final = Configuration(state, Tape(cells1, h1, blank), Tape(cells2, h2, blank),
                          OrdinalTime(c.steps.omega_coeff, c.steps.finite_part + used))
    return RunResult(outcome is not StepOutcome.CONTINUED, outcome, used, final)
