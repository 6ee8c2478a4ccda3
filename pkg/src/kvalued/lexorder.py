"""Lexicographic ordering of computations.

Transitions are comparable when they share origin and input letter. The order
is stored as a global rank per transition; only ranks inside one class are
ever compared. Computations starting at different initial states compare by
the order of the initial states (a virtual hidden initial state).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .core import Machine


class Cmp(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Computation:
    origin: int
    path: tuple[int, ...]

    def end(self, m: Machine) -> int:
        return m.transitions[self.path[-1]].dst if self.path else self.origin

    def label(self, m: Machine) -> str:
        return "".join(m.transitions[t].label for t in self.path)

    def output(self, m: Machine) -> str:
        return "".join(m.transitions[t].out or "" for t in self.path)

    def outputs(self, m: Machine) -> tuple[str, ...]:
        return tuple(m.transitions[t].out or "" for t in self.path)

    def is_chained(self, m: Machine) -> bool:
        state = self.origin
        for t in self.path:
            if not 0 <= t < m.n_transitions or m.transitions[t].src != state:
                return False
            state = m.transitions[t].dst
        return 0 <= self.origin < m.n_states


@dataclass(frozen=True)
class TransitionOrder:
    machine: Machine
    rank: tuple[int, ...]
    initial_rank: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.rank) != self.machine.n_transitions:
            raise ValueError("order does not cover the machine's transitions")
        if not self.initial_rank:
            object.__setattr__(self, "initial_rank",
                               tuple(range(len(self.machine.initials))))

    def initial_position(self, state: int) -> int:
        return self.initial_rank[self.machine.initials.index(state)]

    def ordered_initials(self) -> list[int]:
        m = self.machine
        return sorted(m.initials, key=self.initial_position)

    def precedes(self, f: int, e: int) -> bool:
        """``f`` strictly smaller than ``e`` (both in one class)."""
        return self.rank[f] < self.rank[e]

    def smaller(self, e: int) -> list[int]:
        t = self.machine.transitions[e]
        return [f for f in self.machine.step(t.src, t.label) if self.precedes(f, e)]

    def class_order(self, origin: int, letter: str) -> list[int]:
        return sorted(self.machine.step(origin, letter), key=self.rank.__getitem__)

    def key(self, c: Computation) -> tuple:
        """Sort key; agrees with :func:`lex_compare` on same-label computations from initials."""
        return (self.initial_position(c.origin), tuple(self.rank[t] for t in c.path))


def default_order(m: Machine) -> TransitionOrder:
    return TransitionOrder(m, tuple(range(m.n_transitions)))


def reverse_order(m: Machine) -> TransitionOrder:
    n = m.n_transitions
    return TransitionOrder(m, tuple(n - 1 - i for i in range(n)))


def permuted_order(m: Machine, ids: Sequence[int]) -> TransitionOrder:
    """``ids`` lists every transition id, smallest first."""
    if sorted(ids) != list(range(m.n_transitions)):
        raise ValueError("permutation must list every transition id exactly once")
    rank = [0] * m.n_transitions
    for position, tid in enumerate(ids):
        rank[tid] = position
    return TransitionOrder(m, tuple(rank))


def order_from_flag(m: Machine, flag: str) -> TransitionOrder:
    """Parse ``file``, ``reverse`` or ``perm:3,1,0,2``."""
    if flag == "file":
        return default_order(m)
    if flag == "reverse":
        return reverse_order(m)
    if flag.startswith("perm:"):
        body = flag[5:].strip()
        ids = [int(x) for x in body.split(",")] if body else []
        return permuted_order(m, ids)
    raise ValueError(f"unknown order {flag!r}")


def lex_compare(order: TransitionOrder, c: Computation, d: Computation) -> Cmp:
    m = order.machine
    if not (c.is_chained(m) and d.is_chained(m)):
        raise ValueError("computation is not well chained")
    if c.label(m) != d.label(m):
        return Cmp.INCOMPARABLE
    if c.origin != d.origin:
        if c.origin in m.initials and d.origin in m.initials:
            ci, di = order.initial_position(c.origin), order.initial_position(d.origin)
            return Cmp.LESS if ci < di else Cmp.GREATER
        return Cmp.INCOMPARABLE
    for e, f in zip(c.path, d.path):
        if e != f:
            return Cmp.LESS if order.rank[e] < order.rank[f] else Cmp.GREATER
    return Cmp.EQUAL
