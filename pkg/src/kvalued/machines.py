"""Small reference machines and seeded random generators."""

from __future__ import annotations

import random

from .core import AUTOMATON, NAUTOMATON, TRANSDUCER, Machine, Transition
from .textio import parse_machine

BINARY_COUNTER = """\
# series: u -> integer written by u in binary (a = 0, b = 1)
nautomaton counter
alphabet a b
states p q
initial p
final q
trans p a p
trans p b p
trans p b q
trans q a q *2
trans q b q *2
"""

SHIFTED_COPY = """\
# a^n -> {b^n, b^(n+1)} for n > 0, and the empty word to itself
transducer shifted
alphabet a
outalphabet b
states p q
initial p
final p q
trans p a/b p
trans p a/bb q
trans q a/- p
"""

SHIFTED_COPY_SOURCE = """\
# as T, with the p -> q output written over a second letter
transducer shifted_source
alphabet a
outalphabet b c
states p q
initial p
final p q
trans p a/b p
trans p a/cc q
trans q a/- p
"""

MERGE_TO_B = {"b": "b", "c": "b"}


def binary_counter() -> Machine:
    return parse_machine(BINARY_COUNTER)


def shifted_copy() -> Machine:
    return parse_machine(SHIFTED_COPY)


def shifted_copy_source() -> Machine:
    return parse_machine(SHIFTED_COPY_SOURCE)


def random_nautomaton(rng: random.Random, n_states: int, alphabet="ab",
                      density: float = 0.35, max_mult: int = 2,
                      n_initials: int = 1) -> Machine:
    states = tuple(f"s{i}" for i in range(n_states))
    trans = []
    for p in range(n_states):
        for a in alphabet:
            for q in range(n_states):
                if rng.random() < density:
                    trans.append(Transition(len(trans), p, a, q, None, rng.randint(1, max_mult)))
    initials = tuple(rng.sample(range(n_states), min(n_initials, n_states)))
    finals = frozenset(q for q in range(n_states) if rng.random() < 0.5) or frozenset({n_states - 1})
    kind = NAUTOMATON if max_mult > 1 else AUTOMATON
    return Machine(kind, tuple(alphabet), states, tuple(trans), initials, finals, (), "R")


def random_transducer(rng: random.Random, n_states: int, alphabet="ab", out_alphabet="bc",
                      density: float = 0.3, max_out: int = 2, max_parallel: int = 2,
                      n_initials: int = 1) -> Machine:
    states = tuple(f"s{i}" for i in range(n_states))
    trans = []
    for p in range(n_states):
        for a in alphabet:
            for q in range(n_states):
                if rng.random() < density:
                    for _ in range(rng.randint(1, max_parallel)):
                        out = "".join(rng.choice(out_alphabet)
                                      for _ in range(rng.randint(0, max_out)))
                        trans.append(Transition(len(trans), p, a, q, out))
    initials = tuple(rng.sample(range(n_states), min(n_initials, n_states)))
    finals = frozenset(q for q in range(n_states) if rng.random() < 0.5) or frozenset({0})
    return Machine(TRANSDUCER, tuple(alphabet), states, tuple(trans), initials, finals,
                   tuple(out_alphabet), "R")
