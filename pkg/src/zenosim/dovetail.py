"""Dovetailed speculative execution of programs with oracle tests, cut off at finite rounds.

A program runs inside numbered sub-areas, starting with sub-area 1. When a
branch reaches an oracle test ``if R(f(x), k)`` it is marked for spawning.
At the next round two children appear, one assuming the test is true and
one assuming false, numbered after the last existing sub-area. The parent
stays where it is and spends its instructions evaluating ``f(x)``. When that
evaluation finishes, every sub-area descended from the wrong assumption is
killed, in the current sub-tape and in every earlier one.

Each round advances every live sub-area by one instruction, in index order,
and then snapshots the whole sub-area list as that round's sub-tape. Round
sizes follow ``m <- m + 2**m`` from ``m = 1``. Sub-area indices past the
number of existing sub-areas are absent; they are counted, not stored.

Status markers: killed (Phi) beats halted (pi); absent (psi) areas never come
back.

The run is cut off when the instruction count passes ``fuel``.
:func:`mark_limit` then flags the state as standing for the limit, after
which :func:`u_decide` gives the decider's answer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .machine import (
    Configuration,
    MachineSpec,
    OracleIf,
    StepOutcome,
    UnresolvedOracle,
    initial_config,
    run,
    step,
    validate_spec,
)
from .oracles import OracleTable, Stub, UnknownMachine
from .progformat import encode_for_universal

__all__ = [
    "MalformedState",
    "Status",
    "SubArea",
    "RoundSize",
    "DovetailState",
    "round_sizes",
    "next_round_size",
    "dovetail_init",
    "dovetail_round",
    "run_dovetail",
    "mark_limit",
    "surviving_leaves",
    "u_decide",
    "build_program_y",
    "Profile",
    "HaltingProfile",
    "classify_halting_profile",
    "paradox_report",
    "trace_records",
    "dumps_trace",
]


class MalformedState(ValueError):
    pass


class Status(Enum):
    ACTIVE = "active"
    KILLED = "killed"   # Phi
    HALTED = "halted"   # pi
    ABSENT = "absent"   # psi


@dataclass(frozen=True)
class SubArea:
    index: int
    parent: Optional[int]
    branch_assumption: Optional[bool]
    status: Status
    config: Configuration
    spawn_pending: bool = False
    waiting_on: Optional[OracleIf] = None
    resolved: Optional[bool] = None
    children: tuple = ()
    killed_by: Optional[int] = None

    @property
    def heads(self) -> tuple:
        return (self.config.tape1.head, self.config.tape2.head)


class RoundSize:
    """A round size too large to hold as an integer (from the 6th round on)."""

    def __init__(self, round_index: int):
        self.round_index = round_index

    def __ge__(self, other):
        return isinstance(other, int) or (isinstance(other, RoundSize) and self.round_index >= other.round_index)

    def __eq__(self, other):
        return isinstance(other, RoundSize) and other.round_index == self.round_index

    def __hash__(self):
        return hash(("RoundSize", self.round_index))

    def __str__(self):
        return f"m_{self.round_index}"

    __repr__ = __str__


_EXACT_LIMIT = 1 << 12


def next_round_size(m: Union[int, RoundSize], round_index: int) -> Union[int, RoundSize]:
    """``m + 2**m``; ``round_index`` is the index of the round that ``m`` sized."""
    if isinstance(m, int) and m < _EXACT_LIMIT:
        return m + (1 << m)
    return RoundSize(round_index + 1)


def round_sizes(count: int) -> list:
    sizes = [1]
    while len(sizes) < count:
        sizes.append(next_round_size(sizes[-1], len(sizes)))
    return sizes


def _fits(index: int, m) -> bool:
    return isinstance(m, RoundSize) or index <= m


@dataclass(frozen=True)
class DovetailState:
    program: MachineSpec
    input: tuple
    oracles: OracleTable = field(compare=False)
    w_budget: int = 16
    round_index: int = 0
    m: Union[int, RoundSize] = 1
    areas: tuple = ()
    sub_tapes: tuple = ()
    evaluations: Mapping = field(default_factory=dict)
    t_flag: int = 0
    q_flag: int = 0
    instructions: int = 0
    finished: bool = False
    limit_complete: bool = False

    def area(self, r: int) -> SubArea:
        if 1 <= r <= len(self.areas):
            return self.areas[r - 1]
        return SubArea(r, None, None, Status.ABSENT, initial_config(self.program, self.input))

    def absent_count(self) -> Union[int, str]:
        if isinstance(self.m, RoundSize):
            return f"{self.m}-{len(self.areas)}"
        return max(self.m - len(self.areas), 0)


def dovetail_init(p: MachineSpec, i: Sequence[str] = (), oracles: OracleTable = None,
                  w: int = 16) -> DovetailState:
    root = SubArea(1, None, None, Status.ACTIVE, initial_config(p, tuple(i)))
    s = DovetailState(p, tuple(i), oracles or OracleTable(), w, areas=(root,))
    areas = list(s.areas)
    evals = {}
    _settle(s, areas, evals, 0)
    return replace(s, areas=tuple(areas), evaluations=evals)


def _terminal(c: Configuration, m: MachineSpec) -> bool:
    if c.state in m.accepting:
        return True
    if m.oracle_at(c.state) is not None:
        return False
    return m.action(c.state, c.tape1.read(), c.tape2.read()) is None


def _settle(s: DovetailState, areas: list, evals: dict, pos: int) -> None:
    """Look at the instruction a branch is about to execute: a halt gets pi,
    an oracle test gets a spawn mark and starts its evaluation."""
    a = areas[pos]
    if a.status is not Status.ACTIVE or a.waiting_on is not None:
        return
    if _terminal(a.config, s.program):
        areas[pos] = replace(a, status=Status.HALTED)
        return
    test = s.program.oracle_at(a.config.state)
    if test is not None:
        evals[a.index] = s.oracles.start(test, a.config.tape1.left_of_head())
        areas[pos] = replace(a, spawn_pending=True, waiting_on=test)


def _descendants(areas: Sequence[SubArea], root: int) -> set:
    out = set()
    todo = [root]
    by_index = {a.index: a for a in areas}
    while todo:
        r = todo.pop()
        if r in out:
            continue
        out.add(r)
        todo.extend(by_index[r].children if r in by_index else ())
    return out


def _kill(areas: list, victims: set, killer: int) -> None:
    for k, a in enumerate(areas):
        if a.index in victims and a.status is not Status.KILLED:
            areas[k] = replace(a, status=Status.KILLED, killed_by=killer, spawn_pending=False)


def _definite(a: SubArea, by_index: Mapping[int, SubArea]) -> bool:
    """True when every oracle test on the branch's ancestry has been decided."""
    cur = a
    while cur.parent is not None:
        parent = by_index[cur.parent]
        if parent.resolved is None or parent.resolved != cur.branch_assumption:
            return False
        cur = parent
    return True


def _definite_halt(areas: Sequence[SubArea]) -> bool:
    by_index = {a.index: a for a in areas}
    return any(a.status is Status.HALTED and _definite(a, by_index) for a in areas)


def _definite_running(areas: Sequence[SubArea]) -> bool:
    by_index = {a.index: a for a in areas}
    return any(a.status is Status.ACTIVE and a.waiting_on is None and _definite(a, by_index)
               for a in areas)


def dovetail_round(s: DovetailState) -> DovetailState:
    """One pass over sub-areas ``r = 1 .. m``; see the module docstring."""
    if s.finished:
        return s
    areas = list(s.areas)
    evals = dict(s.evaluations)
    sub_tapes = [list(t) for t in s.sub_tapes]
    instructions = s.instructions

    # children announced last round
    for k in range(len(areas)):
        a = areas[k]
        if not a.spawn_pending or a.status is not Status.ACTIVE:
            continue
        first = len(areas) + 1
        if not _fits(first + 1, s.m):
            continue
        test = a.waiting_on
        kids = []
        for offset, assumption in ((0, True), (1, False)):
            cfg = replace(a.config, state=test.true_state if assumption else test.false_state,
                          steps=a.config.steps.successor())
            status = Status.ACTIVE
            if a.resolved is not None and a.resolved != assumption:
                status = Status.KILLED
            kids.append(SubArea(first + offset, a.index, assumption, status, cfg,
                                killed_by=a.index if status is Status.KILLED else None))
        areas[k] = replace(a, spawn_pending=False, children=(first, first + 1))
        areas.extend(kids)
        _settle(s, areas, evals, len(areas) - 2)
        _settle(s, areas, evals, len(areas) - 1)

    t_flag = s.t_flag
    finished = False
    for pos in range(len(areas)):
        a = areas[pos]
        if not _fits(a.index, s.m):
            break
        if a.status is Status.ACTIVE:
            if a.waiting_on is not None:
                if a.resolved is None:
                    ev = evals[a.index].advance(s.oracles)
                    evals[a.index] = ev
                    instructions += 1
                    if ev.result is not None:
                        areas[pos] = a = replace(a, resolved=ev.result)
                        if a.children:
                            loser = a.children[1] if ev.result else a.children[0]
                            victims = _descendants(areas, loser)
                            _kill(areas, victims, a.index)
                            for tape in sub_tapes:
                                _kill(tape, victims, a.index)
            else:
                c, outcome = step(a.config, s.program)
                if outcome is StepOutcome.CONTINUED:
                    instructions += 1
                    areas[pos] = replace(a, config=c)
                _settle(s, areas, evals, pos)
        if a.index == 1 and _definite_halt(areas):
            t_flag = 1
            finished = True
            break

    q_flag = 1 if any(a.status is not Status.KILLED for a in areas) else 0
    sub_tapes.append(list(areas))
    return replace(
        s,
        round_index=s.round_index + 1,
        m=next_round_size(s.m, s.round_index + 1),
        areas=tuple(areas),
        sub_tapes=tuple(tuple(t) for t in sub_tapes),
        evaluations=evals,
        t_flag=t_flag,
        q_flag=q_flag,
        instructions=instructions,
        finished=finished,
    )


def _can_progress(s: DovetailState) -> bool:
    for a in s.areas:
        if a.status is Status.ACTIVE and (a.waiting_on is None or a.resolved is None or a.spawn_pending):
            return True
    return False


def run_dovetail(p: MachineSpec, i: Sequence[str] = (), oracles: OracleTable = None,
                 fuel: int = 10_000, w: int = 16, on_round=None) -> DovetailState:
    """Drive rounds until a definite halt, ``fuel`` instructions, or no branch can move;
    then mark the state as standing for the limit."""
    s = dovetail_init(p, i, oracles, w)
    while not s.finished and s.instructions < fuel and _can_progress(s):
        s = dovetail_round(s)
        if on_round is not None:
            on_round(s)
    return mark_limit(s)


def mark_limit(s: DovetailState) -> DovetailState:
    """Flag ``s`` as the state after all finitely-indexed rounds.

    The halting check for sub-area 1 is made once more, since a halt found
    late in the last truncated round would be caught at the next one. The
    q flag is then recomputed under the limit reading: it is 1 when a branch
    with no undecided oracle test is still running, i.e. the program itself
    has provably not stopped.
    """
    t_flag = 1 if (s.t_flag or _definite_halt(s.areas)) else 0
    q_flag = 1 if _definite_running(s.areas) else 0
    return replace(s, t_flag=t_flag, q_flag=q_flag, limit_complete=True, finished=True)


def surviving_leaves(s: DovetailState) -> list:
    """Non-killed sub-areas with no materialised children."""
    return [a for a in s.areas if a.status is not Status.KILLED and not a.children]


def _halts_under(p: MachineSpec, i: Sequence[str], name: str, answer: str, fuel: int,
                 oracles: OracleTable) -> bool:
    table = OracleTable(oracles.machines, {**oracles.stubs, name: Stub(answer)}, oracles.fuel)
    try:
        return run(p, i, fuel, table).halted
    except UnresolvedOracle:
        return False


def _self_application(s: DovetailState) -> Optional[str]:
    """Name of the decider when ``s`` runs program y on its own encoding."""
    p = s.program
    if len(p.oracle_rules) != 1:
        return None
    test = p.oracle_rules[0]
    y = build_program_y(test.oracle_machine, [test.oracle_machine])
    if p == y and s.input == encode_for_universal(y):
        return test.oracle_machine
    return None


def u_decide(s: DovetailState, w: Optional[int] = None, fuel: int = 10_000) -> int:
    """The decider's answer once ``s`` stands for the limit.

    Undefined outcomes are reported as 0.
    """
    if not s.limit_complete:
        raise MalformedState("state has not been taken to the limit")
    if s.t_flag == 1:
        return 1
    if s.q_flag == 1:
        return 0
    w = s.w_budget if w is None else w
    live = [a for a in s.sub_tapes[-1] if a.status is not Status.KILLED] if s.sub_tapes else []
    if len(live) < 3:
        return 0
    second, third = live[1], live[2]
    if second.status is not Status.HALTED:
        return 0

    name = _self_application(s)
    if name is None:
        # w more rounds past the limit, then see whether the tests were decided
        ext = replace(s, finished=False, limit_complete=False)
        for _ in range(w):
            if not _can_progress(ext):
                break
            ext = dovetail_round(ext)
        ext = mark_limit(ext)
        if ext.t_flag == 1:
            return 1
        by_index = {a.index: a for a in ext.areas}
        for a in (by_index[second.index], by_index[third.index]):
            if a.status is Status.HALTED and _definite(a, by_index):
                return 1
        return 0

    # y on y: try each answer for the decider and keep the self-consistent ones
    one_ok = _halts_under(s.program, s.input, name, "1", fuel, s.oracles)
    zero_ok = not _halts_under(s.program, s.input, name, "0", fuel, s.oracles)
    if not one_ok and not zero_ok:
        return 0
    if one_ok and not zero_ok:
        return 1 if second.status is Status.HALTED else 0
    if zero_ok and not one_ok:
        return 1 if third.status is Status.HALTED else 0
    return 0


def build_program_y(u_name: str, known: Iterable[str]) -> MachineSpec:
    """``if u(i, i) == 0: return 1 else: loop forever``.

    Returning writes ``1`` on tape 2 and accepts. The input alphabet is the
    universal alphabet so that y can be handed its own encoding.
    """
    if u_name not in set(known):
        raise UnknownMachine(u_name)
    gamma = ["0", "1", "#"]
    blank = "_"
    rules = []
    for sym in gamma + [blank]:
        rules.append(("y_ret", sym, blank, "y_accept", sym, "1", "N", "N"))
        rules.append(("y_loop_a", sym, blank, "y_loop_b", sym, blank, "N", "N"))
        rules.append(("y_loop_b", sym, blank, "y_loop_a", sym, blank, "N", "N"))
    test = OracleIf("y_start", "==", u_name, "0", "y_ret", "y_loop_a")
    return validate_spec(
        states=["y_start", "y_ret", "y_accept", "y_loop_a", "y_loop_b"],
        alphabet=gamma, blank=blank, input_alphabet=gamma,
        start="y_start", accepting=["y_accept"], rules=rules, oracle_rules=[test], name="y",
    )


class Profile(Enum):
    CONDITION1 = "Condition1"
    CONDITION2_EVIDENCE = "Condition2Evidence"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class HaltingProfile:
    kind: Profile
    steps: Optional[int] = None
    evidence: Optional[dict] = None

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "steps": self.steps, "evidence": self.evidence}


def classify_halting_profile(p: MachineSpec, i: Sequence[str] = (), fuel: int = 10_000,
                             w: int = 16, oracles: OracleTable = None) -> HaltingProfile:
    """Finite-truncation evidence for which halting condition ``p`` on ``i`` meets.

    * Condition1: halts within ``fuel`` steps.
    * Condition2Evidence: reaches an oracle test that ``fuel`` cannot decide,
      and at least one answer leads to a halt within ``w`` further steps.
      Branches that outrun ``w`` are reported in the evidence and excluded.
    * Unknown: anything else, including ``w == 0``.
    """
    oracles = oracles or OracleTable(fuel=fuel)
    c = initial_config(p, tuple(i))
    for _ in range(fuel + 1):
        try:
            c, outcome = step(c, p, oracles)
        except UnresolvedOracle:
            return _condition2(p, c, w, oracles)
        if outcome is not StepOutcome.CONTINUED:
            return HaltingProfile(Profile.CONDITION1, steps=c.steps.finite_part)
    return HaltingProfile(Profile.UNKNOWN)


def _condition2(p: MachineSpec, c: Configuration, w: int, oracles: OracleTable) -> HaltingProfile:
    test = p.oracle_at(c.state)
    if w <= 0:
        return HaltingProfile(Profile.UNKNOWN)
    branches = {}
    for label, state in (("true", test.true_state), ("false", test.false_state)):
        start = replace(c, state=state, steps=c.steps.successor())
        try:
            res = run(p, (), w, oracles, start=start)
            branches[label] = res.steps_used if res.halted else None
        except UnresolvedOracle:
            branches[label] = None
    evidence = {
        "at_step": c.steps.finite_part,
        "state": c.state,
        "test": f"{test.oracle_machine} {test.relation} {test.threshold}",
        "suffix_steps": branches,
        "excluded": sorted(k for k, v in branches.items() if v is None),
    }
    if all(v is None for v in branches.values()):
        return HaltingProfile(Profile.UNKNOWN, evidence=evidence)
    return HaltingProfile(Profile.CONDITION2_EVIDENCE, evidence=evidence)


def paradox_report(fuel: int = 10_000, w: int = 16, u_name: str = "u") -> dict:
    """Run y on itself with the decider pinned to each possible answer.

    Neither answer is self-consistent, which is the whole point; no global
    verdict is produced.
    """
    y = build_program_y(u_name, [u_name])
    yy = encode_for_universal(y)
    rows = []
    for answer in (0, 1):
        table = OracleTable(stubs={u_name: Stub(str(answer))}, fuel=fuel)
        res = run(y, yy, fuel, table)
        halts = res.halted and res.outcome is StepOutcome.ACCEPT_HALT
        implied = 1 if halts else 0
        rows.append({
            "assumption": f"{u_name}(y,y)={answer}",
            "y_of_y": f"halts after {res.steps_used} steps" if halts else f"runs past fuel {fuel}",
            "halts": halts,
            "steps": res.steps_used if halts else None,
            "implied_answer": implied,
            "consistent": implied == answer,
        })
    open_table = OracleTable(stubs={u_name: Stub(None)}, fuel=fuel)
    profile = classify_halting_profile(y, yy, fuel, w, open_table)
    return {
        "program": "y",
        "input": "encode(y)",
        "fuel": fuel,
        "w": w,
        "rows": rows,
        "consistent_assumptions": [r["assumption"] for r in rows if r["consistent"]],
        "profile": profile.to_json(),
    }


def trace_records(s: DovetailState) -> Iterator[dict]:
    """One record per (round, existing sub-area) across all stored sub-tapes."""
    sizes = round_sizes(len(s.sub_tapes))
    for k, (tape, m) in enumerate(zip(s.sub_tapes, sizes), 1):
        label = m if isinstance(m, int) and m < (1 << 63) else f"m_{k}"
        for a in tape:
            yield {
                "round": k,
                "m": label,
                "r": a.index,
                "status": a.status.value,
                "state": a.config.state,
                "heads": list(a.heads),
                "spawned": list(a.children),
                "killed_by": a.killed_by,
            }


def dumps_trace(s: DovetailState) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in trace_records(s))
