"""The ``.tm`` text format and the flat {0,1,#} encoding used by the universal simulator.

A document looks like::

    machine inc
    states: q0 q1 qa
    blank: _
    alphabet: 1
    input: 1
    start: q0
    accept: qa
    rule: q0 1 _ -> q0 1 _ R N
    rule: q0 _ _ -> q1 1 _ L N
    rule: q1 1 _ -> qa 1 _ N N
    tape1: 1 1 1
    end

``#`` starts a comment and tokens are separated by whitespace. An optional
``oracle: <q> if <rel> <machine> <k> then <qT> else <qF>`` line attaches an
oracle test to state ``q``.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .machine import MOVES, RELATIONS, MachineError, MachineSpec, OracleIf, validate_spec

__all__ = [
    "ProgramSyntaxError",
    "DecodeError",
    "parse",
    "parse_file",
    "serialize",
    "encode_for_universal",
    "decode_universal",
    "UNIVERSAL_ALPHABET",
]

UNIVERSAL_ALPHABET = ("0", "1", "#")
_BITS = 7


class ProgramSyntaxError(MachineError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DecodeError(ValueError):
    pass


_SINGLE = ("states", "blank", "alphabet", "input", "start", "accept", "tape1")


def parse(src: str):
    """Parse one machine. Returns ``(MachineSpec, input)`` where ``input`` is a
    tuple of symbols, or None when the document has no ``tape1:`` line."""
    name = None
    fields = {}
    rules = []
    oracles = []
    seen_end = False
    last_line = 0
    for lineno, raw in enumerate(src.splitlines(), 1):
        last_line = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if seen_end:
            raise ProgramSyntaxError(lineno, "content after 'end'")
        head, _, rest = line.partition(" ")
        toks = rest.split()
        if head == "machine":
            if name is not None:
                raise ProgramSyntaxError(lineno, "duplicate 'machine' line")
            if len(toks) != 1:
                raise ProgramSyntaxError(lineno, "expected 'machine <name>'")
            name = toks[0]
        elif head == "end":
            if toks:
                raise ProgramSyntaxError(lineno, "'end' takes no arguments")
            seen_end = True
        elif head.endswith(":"):
            key = head[:-1]
            if key == "rule":
                rules.append(_parse_rule(lineno, toks))
            elif key == "oracle":
                oracles.append(_parse_oracle(lineno, toks))
            elif key in _SINGLE:
                if key in fields:
                    raise ProgramSyntaxError(lineno, f"duplicate '{key}:' line")
                fields[key] = (lineno, toks)
            else:
                raise ProgramSyntaxError(lineno, f"unknown section '{key}'")
        else:
            raise ProgramSyntaxError(lineno, f"unrecognised line starting with {head!r}")

    if name is None:
        raise ProgramSyntaxError(1, "missing 'machine <name>' line")
    if not seen_end:
        raise ProgramSyntaxError(last_line + 1, "missing 'end'")
    for key in ("states", "start"):
        if key not in fields:
            raise ProgramSyntaxError(last_line, f"missing '{key}:' line")

    def single(key, default):
        if key not in fields:
            return default
        lineno, toks = fields[key]
        if len(toks) != 1:
            raise ProgramSyntaxError(lineno, f"'{key}:' takes exactly one token")
        return toks[0]

    blank = single("blank", "_")
    start = single("start", None)
    machine = validate_spec(
        states=fields["states"][1],
        alphabet=fields.get("alphabet", (0, []))[1],
        blank=blank,
        input_alphabet=fields.get("input", (0, []))[1],
        start=start,
        accepting=fields.get("accept", (0, []))[1],
        rules=rules,
        oracle_rules=oracles,
        name=name,
    )
    tape = tuple(fields["tape1"][1]) if "tape1" in fields else None
    return machine, tape


def parse_file(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _parse_rule(lineno: int, toks: Sequence[str]) -> tuple:
    if len(toks) != 9 or toks[3] != "->":
        raise ProgramSyntaxError(lineno, "expected 'rule: <q> <r1> <r2> -> <q'> <w1> <w2> <M1> <M2>'")
    q, r1, r2, _, q2, w1, w2, m1, m2 = toks
    for mv in (m1, m2):
        if mv not in MOVES:
            raise ProgramSyntaxError(lineno, f"move {mv!r} is not one of L, N, R")
    return (q, r1, r2, q2, w1, w2, m1, m2)


def _parse_oracle(lineno: int, toks: Sequence[str]) -> OracleIf:
    if len(toks) != 9 or toks[1] != "if" or toks[5] != "then" or toks[7] != "else":
        raise ProgramSyntaxError(
            lineno, "expected 'oracle: <q> if <rel> <machine> <k> then <qT> else <qF>'")
    q, _, rel, fname, k, _, qt, _, qf = toks
    if rel not in RELATIONS:
        raise ProgramSyntaxError(lineno, f"relation {rel!r} is not one of {' '.join(RELATIONS)}")
    return OracleIf(q, rel, fname, k, qt, qf)


def serialize(m: MachineSpec, input: Optional[Sequence[str]] = None) -> str:
    """Canonical text: fixed section order, sorted symbol lists, sorted rules."""
    lines = [
        f"machine {m.name}",
        _line("states:", sorted(m.states)),
        f"blank: {m.blank}",
        _line("alphabet:", sorted(m.alphabet - {m.blank})),
        _line("input:", sorted(m.input_alphabet)),
        f"start: {m.start}",
        _line("accept:", sorted(m.accepting)),
    ]
    for (q, r1, r2), a in sorted(m.rules.items()):
        lines.append(f"rule: {q} {r1} {r2} -> {a.state} {a.write1} {a.write2} {a.move1} {a.move2}")
    for o in sorted(m.oracle_rules, key=lambda o: o.at_state):
        lines.append(f"oracle: {o.at_state} if {o.relation} {o.oracle_machine} {o.threshold} "
                     f"then {o.true_state} else {o.false_state}")
    if input is not None:
        lines.append(_line("tape1:", input))
    lines.append("end")
    return "\n".join(lines) + "\n"


def _line(key: str, toks) -> str:
    return " ".join([key, *toks])


def encode_for_universal(m: MachineSpec, input: Optional[Sequence[str]] = None) -> tuple:
    """Canonical text, one record per line: 7 bits per character, then ``#``."""
    out = []
    for line in serialize(m, input).splitlines():
        for ch in line:
            code = ord(ch)
            if code >= 1 << _BITS:
                raise ValueError(f"character {ch!r} cannot be encoded in {_BITS} bits")
            out.extend(format(code, f"0{_BITS}b"))
        out.append("#")
    return tuple(out)


def decode_universal(symbols: Sequence[str]):
    """Inverse of :func:`encode_for_universal`; raises :class:`DecodeError`."""
    if not symbols or symbols[-1] != "#":
        raise DecodeError("encoding must end with a record terminator")
    lines = []
    record = []
    for s in symbols:
        if s == "#":
            if len(record) % _BITS:
                raise DecodeError("record length is not a multiple of 7")
            chars = [chr(int("".join(record[i:i + _BITS]), 2)) for i in range(0, len(record), _BITS)]
            lines.append("".join(chars))
            record = []
        elif s in ("0", "1"):
            record.append(s)
        else:
            raise DecodeError(f"symbol {s!r} is outside the universal alphabet")
    try:
        return parse("\n".join(lines) + "\n")
    except MachineError as exc:
        raise DecodeError(f"decoded text is not a valid machine: {exc}") from exc
