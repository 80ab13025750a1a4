import itertools
import random
from pathlib import Path

import pytest

from zenosim.machine import validate_spec
from zenosim.progformat import parse_file

MACHINES = Path(__file__).resolve().parent.parent / "machines"


def load(name):
    return parse_file(MACHINES / name)


def one_rule():
    return validate_spec(["q0", "qa"], ["1"], "_", ["1"], "q0", ["qa"],
                         [("q0", "_", "_", "qa", "1", "_", "R", "N")], name="one")


def flipflop():
    return validate_spec(["q0", "q1"], ["1"], "_", ["1"], "q0", [],
                         [("q0", "_", "_", "q1", "_", "_", "N", "N"),
                          ("q1", "_", "_", "q0", "_", "_", "N", "N")], name="flipflop")


def three_step():
    return load("three_step.tm")[0]


def cell_writer():
    return load("cell_writer.tm")[0]


def random_machine(rng, n_states=None, alphabet=("0", "1"), density=0.7, name="rand"):
    n_states = n_states or rng.randint(1, 4)
    states = [f"q{i}" for i in range(n_states)] + ["qa"]
    gamma = list(alphabet) + ["_"]
    rules = []
    for q in states[:-1]:
        for r1 in gamma:
            for r2 in gamma:
                if rng.random() < density:
                    rules.append((q, r1, r2, rng.choice(states), rng.choice(gamma),
                                  rng.choice(gamma), rng.choice("LNR"), rng.choice("LNR")))
    return validate_spec(states, alphabet, "_", alphabet, "q0", ["qa"], rules, name=name)


def random_corpus(n, seed=1234):
    rng = random.Random(seed)
    out = []
    for k in range(n):
        m = random_machine(rng, name=f"r{k}")
        word = tuple(rng.choice(sorted(m.input_alphabet)) for _ in range(rng.randint(0, 5)))
        out.append((m, word))
    return out


def random_right_mover(rng, n_states):
    states = [f"p{i}" for i in range(n_states)] + ["acc"]
    rules = []
    for q in states[:-1]:
        for a in ("0", "1", "_"):
            if rng.random() < 0.8:
                rules.append((q, a, "_", rng.choice(states), a, "_", "R", "N"))
    return validate_spec(states, ["0", "1"], "_", ["0", "1"], "p0", ["acc"], rules, name="rm")


def brute_accepts(m, word):
    # direct definition: follow rules along the word, then one blank read
    q = m.start
    for a in tuple(word) + ("_",):
        if q in m.accepting:
            return True
        act = m.rules.get((q, a, "_"))
        if act is None:
            return False
        q = act.state
    return q in m.accepting


def reference_run(m, word, fuel):
    """Independent interpreter used as an oracle: list-backed tapes grown on
    demand, no shared code with zenosim.machine.

    Returns ``(kind, steps, state, tape1_cells, head1)`` where kind is
    'accept', 'stuck' or 'exhausted'.
    """
    blank = m.blank
    t1 = {i: s for i, s in enumerate(word)}
    t2 = {}
    h1 = h2 = 0
    q = m.start
    n = 0
    table = {(k[0], k[1], k[2]): (a.state, a.write1, a.write2, a.move1, a.move2) for k, a in m.rules.items()}
    delta = {"L": -1, "N": 0, "R": 1}
    while True:
        if q in m.accepting:
            return "accept", n, q, {k: v for k, v in t1.items() if v != blank}, h1
        key = (q, t1.get(h1, blank), t2.get(h2, blank))
        if key not in table:
            return "stuck", n, q, {k: v for k, v in t1.items() if v != blank}, h1
        if n == fuel:
            return "exhausted", n, q, {k: v for k, v in t1.items() if v != blank}, h1
        q2, w1, w2, m1, m2 = table[key]
        t1[h1] = w1
        t2[h2] = w2
        h1 += delta[m1]
        h2 += delta[m2]
        q = q2
        n += 1


def ground_truth(m, word, fuel):
    """Halting step, 'loops' (configuration repeated), or None (unresolved)."""
    blank = m.blank
    t1 = {i: s for i, s in enumerate(word)}
    t2 = {}
    h1 = h2 = 0
    q = m.start
    seen = set()
    delta = {"L": -1, "N": 0, "R": 1}
    for n in range(fuel + 1):
        if q in m.accepting:
            return n
        a = m.rules.get((q, t1.get(h1, blank), t2.get(h2, blank)))
        if a is None:
            return n
        key = (q, h1, h2, frozenset((k, v) for k, v in t1.items() if v != blank),
               frozenset((k, v) for k, v in t2.items() if v != blank))
        if key in seen:
            return "loops"
        seen.add(key)
        t1[h1] = a.write1
        t2[h2] = a.write2
        h1 += delta[a.move1]
        h2 += delta[a.move2]
        q = a.state
    return None


def small_corpus():
    """Every machine with states {q0, q1} plus accepting qa over {_, 1},
    tape 2 inert, each rule writing 1 and moving L, N or R. 10**4 machines."""
    states = ["q0", "q1", "qa"]
    options = [None] + [(q, mv) for q in states for mv in "LNR"]
    slots = [(q, r) for q in ("q0", "q1") for r in ("_", "1")]
    for choice in itertools.product(options, repeat=len(slots)):
        rules = [(q, r, "_", o[0], "1", "_", o[1], "N") for (q, r), o in zip(slots, choice) if o]
        yield validate_spec(states, ["1"], "_", ["1"], "q0", ["qa"], rules, name="small")


@pytest.fixture
def machines_dir():
    return MACHINES
