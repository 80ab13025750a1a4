"""Universal simulation of encoded machines, read-only right movers as DFAs,
and bounded language-equivalence checks.

Universal simulation decodes the {0,1,#} tape back to a machine and then
interprets it. That is a statement about simulation fidelity, not a
concrete universal transition table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .machine import MachineSpec, RunResult, StepOutcome, run
from .progformat import decode_universal

__all__ = [
    "NotRightMover",
    "FuelTooSmall",
    "Dfa",
    "EquivalenceResult",
    "simulate",
    "is_right_mover",
    "right_mover_accepts",
    "right_mover_to_dfa",
    "language_equiv_bounded",
    "strings_up_to",
    "dfa_to_json",
    "dfa_from_json",
]


class NotRightMover(ValueError):
    pass


class FuelTooSmall(RuntimeError):
    def __init__(self, word):
        super().__init__(f"fuel ran out on input {''.join(word)!r}; verdict would be unsound")
        self.word = tuple(word)


def simulate(e: Sequence[str], fuel: int) -> RunResult:
    m, tape = decode_universal(e)
    return run(m, tape or (), fuel)


@dataclass(frozen=True)
class Dfa:
    states: frozenset
    alphabet: frozenset
    transition: Mapping
    start: object
    accepting: frozenset

    def __post_init__(self):
        if self.start not in self.states:
            raise ValueError("start state is not a DFA state")
        for q in self.states:
            for a in self.alphabet:
                if self.transition.get((q, a)) not in self.states:
                    raise ValueError(f"transition missing or dangling for ({q!r}, {a!r})")

    def accepts(self, word: Iterable[str]) -> bool:
        q = self.start
        for a in word:
            q = self.transition[(q, a)]
        return q in self.accepting

    def __hash__(self):
        return hash((self.states, self.alphabet, self.start, self.accepting))


def is_right_mover(m: MachineSpec) -> bool:
    if m.oracle_rules:
        return False
    for (q, r1, r2), a in m.rules.items():
        if a.write1 != r1 or a.write2 != r2 or a.move1 != "R" or a.move2 != "N":
            return False
    return True


def right_mover_accepts(m: MachineSpec, word: Sequence[str]) -> bool:
    """Acceptance for right movers: reach an accepting state within
    ``len(word) + 1`` transitions, starting on the first input cell."""
    res = run(m, word, len(word) + 1)
    return res.outcome is StepOutcome.ACCEPT_HALT


_ACCEPT = ("<accept>",)
_DEAD = ("<dead>",)


def right_mover_to_dfa(m: MachineSpec) -> Dfa:
    """Turn a read-only right mover into an equivalent DFA over its input alphabet.

    Tape 2 never changes, so the head on tape 2 always reads the blank. The
    DFA tracks the control state; reaching an accepting state mid-word is
    absorbing, and after the last symbol one more transition on the blank
    may still accept.
    """
    if not is_right_mover(m):
        raise NotRightMover(f"machine {m.name!r} is not a read-only right mover on tape 1")
    b = m.blank
    sigma = m.input_alphabet
    states = set(m.states) | {_ACCEPT, _DEAD}
    delta = {}
    for a in sigma:
        delta[(_ACCEPT, a)] = _ACCEPT
        delta[(_DEAD, a)] = _DEAD
    for q in m.states:
        for a in sigma:
            if q in m.accepting:
                delta[(q, a)] = _ACCEPT
                continue
            act = m.rules.get((q, a, b))
            if act is None:
                delta[(q, a)] = _DEAD
            else:
                delta[(q, a)] = _ACCEPT if act.state in m.accepting else act.state
    accepting = {_ACCEPT}
    for q in m.states:
        if q in m.accepting:
            accepting.add(q)
            continue
        act = m.rules.get((q, b, b))
        if act is not None and act.state in m.accepting:
            accepting.add(q)
    return Dfa(frozenset(states), frozenset(sigma), delta, m.start, frozenset(accepting))


def strings_up_to(alphabet: Iterable[str], max_len: int) -> Iterator[tuple]:
    """All strings in length-first, then lexicographic, order."""
    symbols = sorted(alphabet)
    for n in range(max_len + 1):
        yield from itertools.product(symbols, repeat=n)


@dataclass(frozen=True)
class EquivalenceResult:
    counterexample: Optional[tuple] = None

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None

    def __bool__(self):
        return self.equivalent


Recognizer = Union[MachineSpec, Dfa]


def _alphabet(x: Recognizer) -> frozenset:
    return x.alphabet if isinstance(x, Dfa) else x.input_alphabet


def _acceptor(x: Recognizer, fuel: int):
    if isinstance(x, Dfa):
        return x.accepts
    if is_right_mover(x):
        return lambda w: right_mover_accepts(x, w)

    def accepts(w):
        res = run(x, w, fuel)
        if not res.halted:
            raise FuelTooSmall(w)
        return res.outcome is StepOutcome.ACCEPT_HALT
    return accepts


def language_equiv_bounded(a: Recognizer, b: Recognizer, max_len: int, fuel: int = 10_000) -> EquivalenceResult:
    """Compare two recognizers on every string of length ``<= max_len``.

    Returns the shortest (then lexicographically smallest) disagreement.
    """
    sigma = _alphabet(a)
    if sigma != _alphabet(b):
        raise ValueError("recognizers have different input alphabets")
    acc_a, acc_b = _acceptor(a, fuel), _acceptor(b, fuel)
    for w in strings_up_to(sigma, max_len):
        if acc_a(w) != acc_b(w):
            return EquivalenceResult(w)
    return EquivalenceResult()


def dfa_to_json(d: Dfa) -> dict:
    name = {q: _state_name(q) for q in d.states}
    return {
        "states": sorted(name.values()),
        "alphabet": sorted(d.alphabet),
        "start": name[d.start],
        "accept": sorted(name[q] for q in d.accepting),
        "transitions": {name[q]: {a: name[d.transition[(q, a)]] for a in sorted(d.alphabet)}
                        for q in sorted(d.states, key=_state_name)},
    }


def dfa_from_json(obj: Mapping) -> Dfa:
    delta = {(q, a): t for q, row in obj["transitions"].items() for a, t in row.items()}
    return Dfa(frozenset(obj["states"]), frozenset(obj["alphabet"]), delta,
               obj["start"], frozenset(obj["accept"]))


def _state_name(q) -> str:
    return q[0] if isinstance(q, tuple) else str(q)

