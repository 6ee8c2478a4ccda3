"""Brute-force ground truth: enumerate computations, evaluate behaviours word by word.

Nothing here shares code with the constructions it is used to check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import NAUTOMATON, TRANSDUCER, AUTOMATON, CapExceeded, Machine
from .lexorder import Computation, TransitionOrder, default_order

ENUM_CAP = 100_000


def words_up_to(alphabet, max_len: int) -> Iterator[str]:
    """All words of length <= ``max_len`` in length-lexicographic order."""
    letters = sorted(alphabet)
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            yield "".join(w)


def enumerate_computations(m: Machine, u: str, order: Optional[TransitionOrder] = None,
                           successful: bool = False, cap: int = ENUM_CAP) -> list[Computation]:
    """Computations from an initial state with input ``u``, sorted by the lex order."""
    order = order or default_order(m)
    found: list[Computation] = []
    for origin in m.initials:
        stack = [(origin, ())]
        while stack:
            state, path = stack.pop()
            if len(path) == len(u):
                if not successful or state in m.finals:
                    found.append(Computation(origin, path))
                    if len(found) > cap:
                        raise CapExceeded("computation enumeration", cap)
                continue
            for t in m.step(state, u[len(path)]):
                stack.append((m.transitions[t].dst, path + (t,)))
    found.sort(key=order.key)
    return found


def enumerate_successful(m: Machine, u: str, order: Optional[TransitionOrder] = None,
                         cap: int = ENUM_CAP) -> list[Computation]:
    return enumerate_computations(m, u, order, successful=True, cap=cap)


def _weights(m: Machine, u: str) -> dict[int, int]:
    vec = {s: 1 for s in m.initials}
    for a in u:
        nxt: dict[int, int] = {}
        for s, w in vec.items():
            for t in m.step(s, a):
                e = m.transitions[t]
                nxt[e.dst] = nxt.get(e.dst, 0) + w * e.mult
        vec = nxt
    return vec


def eval_series(m: Machine, u: str) -> int:
    """Sum over successful computations of the product of multiplicities."""
    return sum(w for s, w in _weights(m, u).items() if s in m.finals)


def count_successful(m: Machine, u: str) -> int:
    """Number of successful computations labelled (input-labelled) by ``u``."""
    vec = {s: 1 for s in m.initials}
    for a in u:
        nxt: dict[int, int] = {}
        for s, w in vec.items():
            for t in m.step(s, a):
                d = m.transitions[t].dst
                nxt[d] = nxt.get(d, 0) + w
        vec = nxt
    return sum(w for s, w in vec.items() if s in m.finals)


def eval_relation(t: Machine, u: str) -> frozenset[str]:
    if t.kind != TRANSDUCER:
        raise ValueError("eval_relation needs a transducer")
    configs = {(s, "") for s in t.initials}
    for a in u:
        configs = {(t.transitions[e].dst, out + t.transitions[e].out)
                   for s, out in configs for e in t.step(s, a)}
    return frozenset(out for s, out in configs if s in t.finals)


def accepts(m: Machine, u: str) -> bool:
    return count_successful(m, u) > 0


def behaviour(m: Machine, u: str):
    if m.kind == TRANSDUCER:
        return eval_relation(m, u)
    if m.kind == NAUTOMATON:
        return eval_series(m, u)
    return accepts(m, u)


@dataclass(frozen=True)
class Measure:
    """Maximum observed over bounded-length words; never a global claim."""

    value: int
    witness: Optional[str]
    growing: bool  # maximum still increasing at the last length examined


def _max_over(alphabet, max_len, f) -> Measure:
    best, witness = 0, None
    per_len = [0] * (max_len + 1)
    for u in words_up_to(alphabet, max_len):
        v = f(u)
        per_len[len(u)] = max(per_len[len(u)], v)
        if v > best:
            best, witness = v, u
    growing = max_len > 0 and per_len[-1] > per_len[-2]
    return Measure(best, witness, growing)


def valuedness_up_to(t: Machine, max_len: int) -> Measure:
    return _max_over(t.alphabet, max_len, lambda u: len(eval_relation(t, u)))


def ambiguity_up_to(m: Machine, max_len: int) -> Measure:
    """Successful-computation count (multiplicities expanded for N-automata)."""
    f = (lambda u: eval_series(m, u)) if m.kind == NAUTOMATON else (lambda u: count_successful(m, u))
    return _max_over(m.alphabet, max_len, f)


def skim_value(a: Machine, k: int, u: str) -> int:
    s = eval_series(a, u) if a.kind == NAUTOMATON else count_successful(a, u)
    return s - k if s > k else 0


def equivalent_up_to(m1: Machine, m2: Machine, max_len: int) -> tuple[bool, Optional[str]]:
    """Compare behaviours on every word of length <= ``max_len``; return the first difference."""
    if (m1.kind == TRANSDUCER) != (m2.kind == TRANSDUCER):
        raise ValueError("cannot compare a transducer with an automaton")
    if m1.kind == TRANSDUCER:
        f = eval_relation
    elif AUTOMATON in (m1.kind, m2.kind) and m1.kind != m2.kind:
        f = accepts
    else:
        f = behaviour
    alphabet = sorted(set(m1.alphabet) | set(m2.alphabet))
    for u in words_up_to(alphabet, max_len):
        if f(m1, u) != f(m2, u):
            return False, u
    return True, None
