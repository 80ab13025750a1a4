"""Command-line entry point.

Exit codes, shared by every subcommand:

  0  definite result / success
  1  invalid input (or, for ``dfa``, a counterexample was found)
  2  fuel exhausted without a definite result
  3  precondition violated (``dfa`` on a machine that is not a right mover)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .counter import counter_after, counter_init, take_limit
from .dovetail import classify_halting_profile, dumps_trace, paradox_report, run_dovetail, u_decide
from .machine import MachineError, StepOutcome, UnresolvedOracle, initial_config, step
from .oracles import OracleTable, Stub, UnknownMachine
from .progformat import ProgramSyntaxError, parse_file
from .universal import (
    NotRightMover,
    dfa_from_json,
    dfa_to_json,
    language_equiv_bounded,
    right_mover_to_dfa,
)
from .zenohalt import Exhausted, zeno_halt_check
from .zenotime import ZenoSchedule

EXIT_OK, EXIT_INVALID, EXIT_EXHAUSTED, EXIT_PRECONDITION = 0, 1, 2, 3


def default_fuel() -> int:
    return int(os.environ.get("ZENOSIM_FUEL", "10000"))


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _natural(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _mu0(text):
    x = Fraction(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("mu0 must be positive")
    return x


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _load(path, input_override=None):
    m, tape = parse_file(path)
    if input_override is not None:
        tape = tuple(input_override.split())
    return m, tape or ()


def _oracles(args) -> OracleTable:
    machines = {}
    for path in getattr(args, "oracle", None) or ():
        f, _ = parse_file(path)
        machines[f.name] = f
    stubs = {}
    for entry in getattr(args, "stub", None) or ():
        name, _, out = entry.partition("=")
        stubs[name] = Stub(out if out != "?" else None)
    return OracleTable(machines, stubs, fuel=args.fuel)


def cmd_validate(args):
    m, tape = parse_file(args.file)
    _emit({"valid": True, "machine": m.name, "states": len(m.states), "rules": len(m.rules),
           "oracles": len(m.oracle_rules), "input": None if tape is None else " ".join(tape)})
    return EXIT_OK


def cmd_run(args):
    m, tape = _load(args.file, args.input)
    table = _oracles(args)
    c = initial_config(m, tape)
    outcome = StepOutcome.CONTINUED
    jsonl = args.trace == "jsonl"
    while True:
        nxt, outcome = step(c, m, table)
        if outcome is not StepOutcome.CONTINUED:
            break
        if c.steps.finite_part >= args.fuel:
            break
        c = nxt
        if jsonl:
            _emit({"step": c.steps.finite_part, "state": c.state,
                   "head1": c.tape1.head, "head2": c.tape2.head})
    halted = outcome is not StepOutcome.CONTINUED
    summary = {
        "result": "halted" if halted else "exhausted",
        "outcome": outcome.value if halted else None,
        "steps": c.steps.finite_part,
        "state": c.state,
        "tape1": " ".join(c.tape1.span()),
        "tape2": " ".join(c.tape2.span()),
    }
    if jsonl:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    else:
        _emit(summary)
    return EXIT_OK if halted else EXIT_EXHAUSTED


def cmd_zeno(args):
    m, tape = _load(args.file, args.input)
    res = zeno_halt_check(m, tape, args.fuel, args.limit_stage, ZenoSchedule(args.mu0), _oracles(args))
    if isinstance(res, Exhausted):
        _emit({"exhausted": True, "steps": str(res.config.steps), "counter": str(res.counter)})
        return EXIT_EXHAUSTED
    _emit(res.to_json())
    return EXIT_OK


def cmd_counter(args):
    if args.limit:
        c = take_limit(counter_after(args.n or 0))
    else:
        c = counter_after(args.n) if args.n else counter_init()
    print(c)
    return EXIT_OK


def cmd_dovetail(args):
    m, tape = _load(args.file, args.input)
    table = _oracles(args)
    s = run_dovetail(m, tape, table, args.fuel, args.w)
    sys.stdout.write(dumps_trace(s))
    profile = classify_halting_profile(m, tape, args.fuel, args.w, table)
    _emit({"final": {
        "rounds": s.round_index,
        "instructions": s.instructions,
        "sub_areas": len(s.areas),
        "t": s.t_flag,
        "q": s.q_flag,
        "u": u_decide(s, args.w, args.fuel),
        "profile": profile.to_json(),
    }})
    return EXIT_OK


def cmd_paradox(args):
    _emit(paradox_report(args.fuel, args.w))
    return EXIT_OK


def cmd_dfa(args):
    m, _ = _load(args.file)
    try:
        dfa = right_mover_to_dfa(m)
    except NotRightMover as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    other = m
    if args.against:
        with open(args.against) as fh:
            other = dfa_from_json(json.load(fh))
    res = language_equiv_bounded(dfa, other, args.max_len, args.fuel)
    out = {"equivalent": res.equivalent, "max_len": args.max_len}
    if args.show_dfa:
        out["dfa"] = dfa_to_json(dfa)
    if not res.equivalent:
        out["counterexample"] = " ".join(res.counterexample)
        _emit(out)
        return EXIT_INVALID
    _emit(out)
    return EXIT_OK


def cmd_report(args):
    from . import report

    paths = report.write_clock_report(args.out, args.n, ZenoSchedule(args.mu0))
    if args.dovetail:
        m, tape = _load(args.dovetail)
        s = run_dovetail(m, tape, _oracles(args), args.fuel, args.w)
        paths += report.write_dovetail_report(args.out, s)
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zenosim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file=True, oracle=False):
        if file:
            p.add_argument("file")
            p.add_argument("--input", help="whitespace-separated input symbols; overrides tape1:")
        p.add_argument("--fuel", type=_positive_int, default=default_fuel())
        if oracle:
            p.add_argument("--oracle", action="append", metavar="FILE",
                           help="load an oracle machine; referenced by its machine name")
            p.add_argument("--stub", action="append", metavar="NAME=OUTPUT",
                           help="fixed oracle answer; OUTPUT '?' never answers")

    p = sub.add_parser("validate", help="parse and validate a .tm file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a machine directly")
    common(p, oracle=True)
    p.add_argument("--trace", choices=["text", "jsonl"], default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("zeno", help="Zeno-machine halting check")
    common(p, oracle=True)
    p.add_argument("--limit-stage", dest="limit_stage", action="store_true", default=True)
    p.add_argument("--no-limit-stage", dest="limit_stage", action="store_false")
    p.add_argument("--mu0", type=_mu0, default=Fraction(1))
    p.set_defaults(func=cmd_zeno)

    p = sub.add_parser("counter", help="render the halving counter")
    p.add_argument("--n", type=_natural, default=None)
    p.add_argument("--limit", action="store_true")
    p.set_defaults(func=cmd_counter)

    p = sub.add_parser("dovetail", help="dovetailed speculative run with JSON-lines trace")
    common(p, oracle=True)
    p.add_argument("--w", type=_natural, default=16)
    p.set_defaults(func=cmd_dovetail)

    p = sub.add_parser("paradox", help="y-on-y contradiction table")
    common(p, file=False)
    p.add_argument("--w", type=_natural, default=16)
    p.set_defaults(func=cmd_paradox)

    p = sub.add_parser("dfa", help="right mover to DFA plus bounded equivalence")
    common(p)
    p.add_argument("--max-len", type=_natural, default=10)
    p.add_argument("--against", metavar="DFA_JSON", help="compare the converted DFA with this DFA")
    p.add_argument("--show-dfa", action="store_true")
    p.set_defaults(func=cmd_dfa)

    p = sub.add_parser("report", help="write CSV tables and figures")
    p.add_argument("out")
    p.add_argument("--n", type=_natural, default=20)
    p.add_argument("--mu0", type=_mu0, default=Fraction(1))
    p.add_argument("--dovetail", metavar="FILE")
    p.add_argument("--fuel", type=_positive_int, default=default_fuel())
    p.add_argument("--w", type=_natural, default=16)
    p.add_argument("--oracle", action="append", metavar="FILE")
    p.add_argument("--stub", action="append", metavar="NAME=OUTPUT")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProgramSyntaxError as exc:
        print(f"{getattr(args, 'file', '-')}:{exc.line}: {exc.reason}", file=sys.stderr)
        return EXIT_INVALID
    except (MachineError, UnknownMachine, OSError, ValueError) as exc:
        print(f"{getattr(args, 'file', '-')}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnresolvedOracle as exc:
        print(f"{getattr(args, 'file', '-')}: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
