import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import MACHINES, load, one_rule, random_corpus, random_machine
from zenosim.machine import DuplicateRule, OracleIf, RuleFromAccepting
from zenosim.progformat import (
    DecodeError,
    ProgramSyntaxError,
    decode_universal,
    encode_for_universal,
    parse,
    serialize,
)

ONE_RULE_TEXT = """\
machine one
states: q0 qa
blank: _
alphabet: 1
input: 1
start: q0
accept: qa
rule: q0 _ _ -> qa 1 _ R N
end
"""

ORACLE_DOC = """\
machine branchy   # trailing comment
states: a b c done
blank: _
alphabet: 0 1
input: 0 1
start: a
accept: done
rule: b _ _ -> done 1 _ N N
rule: c _ _ -> done 0 _ N N
oracle: a if <= parity 1 then b else c
tape1: 1 1 0
end
"""


def test_minimal_document_parses():
    m, tape = parse(ONE_RULE_TEXT)
    assert m == one_rule()
    assert tape is None


def test_canonical_one_rule_text():
    assert serialize(one_rule()) == ONE_RULE_TEXT
    assert len(ONE_RULE_TEXT.splitlines()) == 9


def test_bad_move_is_a_syntax_error():
    doc = ONE_RULE_TEXT.replace("rule: q0 _ _ -> qa 1 _ R N", "rule: q0 0 _ -> q1 1 _ X N")
    with pytest.raises(ProgramSyntaxError) as err:
        parse(doc)
    assert err.value.line == 8


def test_oracle_document():
    m, tape = parse(ORACLE_DOC)
    assert m.oracle_rules == (OracleIf("a", "<=", "parity", "1", "b", "c"),)
    assert tape == ("1", "1", "0")
    again = parse(serialize(m, tape))
    assert again == (m, tape)


def test_rules_are_emitted_sorted():
    doc = ONE_RULE_TEXT.replace(
        "rule: q0 _ _ -> qa 1 _ R N",
        "rule: q0 _ _ -> qa 1 _ R N\nrule: q0 1 _ -> q0 1 _ L N").replace("states: q0 qa", "states: qa q0")
    reordered = doc.replace("rule: q0 _ _ -> qa 1 _ R N\nrule: q0 1 _ -> q0 1 _ L N",
                            "rule: q0 1 _ -> q0 1 _ L N\nrule: q0 _ _ -> qa 1 _ R N")
    out = serialize(*parse(reordered))
    rules = [ln for ln in out.splitlines() if ln.startswith("rule:")]
    assert rules == sorted(rules)
    assert out == serialize(*parse(doc))


@pytest.mark.parametrize("doc, line", [
    ("machine x\nstates: q\nstart: q\n", 4),                         # missing end
    ("states: q\nstart: q\nend\n", 1),                               # missing machine
    ("machine x\nstates: q\nstart: q\nbogus: 1\nend\n", 4),
    ("machine x\nstates: q\nstart: q\nend\nstates: q\n", 5),
    ("machine x\nstates: q\nstates: q\nstart: q\nend\n", 3),
    ("machine x\nstates: q r\nstart: q\noracle: q if ~ f 1 then q else r\nend\n", 4),
    ("machine x\nstates: q r\nstart: q\noracle: q when == f 1 then q else r\nend\n", 4),
    ("machine x\nstates: q\nblank: _ _\nstart: q\nend\n", 3),
])
def test_syntax_errors_carry_lines(doc, line):
    with pytest.raises(ProgramSyntaxError) as err:
        parse(doc)
    assert err.value.line == line


def test_validation_errors_propagate():
    with pytest.raises(RuleFromAccepting):
        parse(ONE_RULE_TEXT.replace("rule: q0 _ _", "rule: qa _ _"))
    with pytest.raises(DuplicateRule):
        parse(ONE_RULE_TEXT.replace("end", "rule: q0 _ _ -> q0 _ _ N N\nend"))


def test_sample_machine_files_round_trip():
    for path in sorted(MACHINES.glob("*.tm")):
        m, tape = load(path.name)
        assert parse(serialize(m, tape)) == (m, tape)


def test_round_trip_random_corpus():
    for m, word in random_corpus(200, seed=5):
        assert parse(serialize(m, word)) == (m, word)
        assert parse(serialize(m)) == (m, None)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6), st.data())
def test_rule_arity_corruption_rejected(seed, data):
    m = random_machine(random.Random(seed), density=0.9)
    lines = serialize(m).splitlines()
    rule_lines = [i for i, ln in enumerate(lines) if ln.startswith("rule:")]
    if not rule_lines:
        return
    i = data.draw(st.sampled_from(rule_lines))
    toks = lines[i].split()
    if data.draw(st.booleans()):
        del toks[data.draw(st.integers(1, len(toks) - 1))]
    else:
        toks.insert(data.draw(st.integers(1, len(toks))), data.draw(st.sampled_from(["0", "1", "_", "q0", "R"])))
    lines[i] = " ".join(toks)
    with pytest.raises(ProgramSyntaxError):
        parse("\n".join(lines))


def test_encoding_round_trip_and_injectivity():
    corpus = random_corpus(120, seed=99)
    seen = {}
    for m, word in corpus:
        e = encode_for_universal(m, word)
        assert set(e) <= {"0", "1", "#"}
        assert decode_universal(e) == (m, word)
        seen.setdefault(e, (m, word))
        assert seen[e] == (m, word)
    distinct = {(serialize(m, w)) for m, w in corpus}
    assert len({encode_for_universal(m, w) for m, w in corpus}) == len(distinct)


def test_encoding_grows_linearly_in_rules():
    # family: k rules of identical shape; each adds one fixed-size record
    def family(k):
        states = [f"s{i:03d}" for i in range(k + 1)]
        rules = "".join(f"rule: s{i:03d} _ _ -> s{i + 1:03d} 1 _ R N\n" for i in range(k))
        return parse(f"machine fam\nstates: {' '.join(states)}\nalphabet: 1\nstart: s000\n{rules}end\n")[0]
    lengths = [len(encode_for_universal(family(k))) for k in range(1, 40)]
    diffs = {b - a for a, b in zip(lengths, lengths[1:])}
    rule_line = len("rule: s000 _ _ -> s001 1 _ R N")
    # each extra rule adds one rule record plus its '#', and one state token
    assert diffs == {7 * rule_line + 1 + 7 * len(" s000")}


@pytest.mark.parametrize("bad", [
    (), ("0", "1"), ("0",) * 6 + ("#",), ("0",) * 7 + ("2", "#"),
])
def test_decode_errors(bad):
    with pytest.raises(DecodeError):
        decode_universal(bad)


def test_decode_rejects_garbage_text():
    junk = tuple("".join(format(ord(c), "07b") for c in "hello")) + ("#",)
    with pytest.raises(DecodeError):
        decode_universal(junk)
