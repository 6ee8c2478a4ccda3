"""Multi-skimming covering of an N-automaton and its unambiguous layers.

Each state of the covering pairs a base state with a vector counting, per end
state and saturated in ``N_k = {0, .., k-1, w}``, the computations with the
same label that are strictly smaller in the lexicographic order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Optional

from .core import (AUTOMATON, DEFAULT_CAP, NAUTOMATON, TRANSDUCER, CapExceeded, Machine,
                   Morphism, Transition, split_multiplicities)
from .lexorder import TransitionOrder, default_order

CountVector = tuple[int, ...]


@dataclass(frozen=True)
class Nk:
    """The quotient semiring of N by ``k = k + 1``; the value ``k`` stands for omega."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")

    @property
    def omega(self) -> int:
        return self.k

    def sat(self, n: int) -> int:
        return min(n, self.k)

    def add(self, a: int, b: int) -> int:
        return min(a + b, self.k)

    def mul(self, a: int, b: int) -> int:
        # 0 * omega = 0 falls out of the plain product
        return min(a * b, self.k)

    def total(self, values) -> int:
        s = 0
        for v in values:
            s = self.add(s, v)
        return s

    def render(self, v: int) -> str:
        return "w" if v >= self.k else str(v)


@dataclass(frozen=True)
class SkimResult:
    machine: Machine        # the covering, characteristic
    projection: Morphism    # onto ``base``
    base: Machine           # characteristic form of the input automaton
    vectors: tuple[CountVector, ...]
    k: int
    order: TransitionOrder

    def state_of(self, base_name: str, vector: CountVector) -> Optional[int]:
        key = (self.base.state_index(base_name), vector)
        for s, v in enumerate(self.vectors):
            if (self.projection.state_map[s], v) == key:
                return s
        return None


def characteristic_form(a: Machine) -> Machine:
    if a.kind == TRANSDUCER:
        raise ValueError("multi-skimming takes an automaton or an N-automaton")
    if a.kind == NAUTOMATON and not a.is_characteristic:
        return split_multiplicities(a)[0]
    return a


def smtrans_count(a: Machine, order: TransitionOrder, e: int) -> CountVector:
    """Per end state, how many transitions of ``e``'s class are smaller than ``e``."""
    vec = [0] * a.n_states
    for f in order.smaller(e):
        vec[a.transitions[f].dst] += 1
    return tuple(vec)


def vector_name(nk: Nk, v: CountVector) -> str:
    return ".".join(nk.render(x) for x in v)


def multi_skim(a: Machine, k: int, order: Optional[TransitionOrder] = None,
               cap: int = DEFAULT_CAP) -> SkimResult:
    """Reachable part of the ``N_k`` quotient of the multi-skimming covering.

    ``order`` must be an order on the characteristic form of ``a`` (which is
    ``a`` itself when every multiplicity is 1).
    """
    nk = Nk(k)
    base = characteristic_form(a)
    order = order or default_order(base)
    if order.machine != base:
        raise ValueError("order is not defined on the characteristic form of the automaton")
    n = base.n_states
    bump = [tuple(nk.sat(x) for x in smtrans_count(base, order, e.id))
            for e in base.transitions]
    moves = {letter: [[] for _ in range(n)] for letter in base.alphabet}
    for e in base.transitions:
        moves[e.label][e.src].append(e.dst)

    def times(v: CountVector, letter: str) -> list[int]:
        out = [0] * n
        for p, vp in enumerate(v):
            if vp:
                for q in moves[letter][p]:
                    out[q] = nk.add(out[q], vp)
        return out

    ids: dict[tuple[int, CountVector], int] = {}
    keys: list[tuple[int, CountVector]] = []
    todo: deque[int] = deque()

    def intern(key) -> int:
        sid = ids.get(key)
        if sid is None:
            if len(keys) >= cap:
                raise CapExceeded("multi-skimming covering", cap, f"n(k+1)^n = {n * (k + 1) ** n}")
            sid = ids[key] = len(keys)
            keys.append(key)
            todo.append(sid)
        return sid

    initials = []
    seen_initial = [0] * n
    for p in order.ordered_initials():
        initials.append(intern((p, tuple(seen_initial))))
        seen_initial[p] = nk.add(seen_initial[p], 1)

    trans: list[Transition] = []
    back: list[int] = []
    cache: dict[tuple[CountVector, str], list[int]] = {}
    while todo:
        sid = todo.popleft()
        p, v = keys[sid]
        for e in base.outgoing[p]:
            t = base.transitions[e]
            carried = cache.get((v, t.label))
            if carried is None:
                carried = cache[(v, t.label)] = times(v, t.label)
            w = tuple(nk.add(x, y) for x, y in zip(carried, bump[e]))
            dst = intern((t.dst, w))
            trans.append(Transition(len(trans), sid, t.label, dst))
            back.append(e)

    states = tuple(f"{base.states[p]}__{vector_name(nk, v)}" for p, v in keys)
    finals = frozenset(s for s, (p, _) in enumerate(keys) if p in base.finals)
    b = Machine(NAUTOMATON, base.alphabet, states, tuple(trans), tuple(initials), finals,
                (), f"{a.name}_skim{k}")
    projection = Morphism(b, base, tuple(p for p, _ in keys), tuple(back))
    return SkimResult(b, projection, base, tuple(v for _, v in keys), k, order)


def layer_sum(res: SkimResult, state: int) -> int:
    nk = Nk(res.k)
    v = res.vectors[state]
    return nk.total(v[q] for q in sorted(res.base.finals))


def skim_layers(res: SkimResult) -> tuple[list[tuple[Machine, Morphism]], tuple[Machine, Morphism]]:
    """Layers ``0..k-1`` and the remainder, each the covering with fewer final states.

    Layer ``i`` keeps final the states over a final base state whose vector
    sums to ``i`` over the final base states; the remainder keeps those whose
    sum saturates. Morphisms go to the base and carry their completion.
    """
    b, k = res.machine, res.k
    buckets: dict[int, set[int]] = {i: set() for i in range(k + 1)}
    for s in b.finals:
        buckets[layer_sum(res, s)].add(s)

    def sub(i: int, name: str):
        m = b.with_finals(buckets[i], name=name)
        embed = Morphism(m, b, tuple(range(b.n_states)), tuple(range(b.n_transitions)))
        return m, replace(res.projection.with_source(m), completion=(embed, res.projection))

    layers = [sub(i, f"{b.name}_layer{i}") for i in range(k)]
    return layers, sub(k, f"{b.name}_rest")


def size_bound(n: int, k: int) -> int:
    return n * (k + 1) ** n


def as_automaton(m: Machine) -> Machine:
    """Forget multiplicities of a characteristic N-automaton."""
    return replace(m, kind=AUTOMATON)
