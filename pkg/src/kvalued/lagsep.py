"""Lag-separation covering of a real-time transducer and the selected subtransducer.

States pair a base state with a vector of finite sets of Lead-or-Delay values:
entry ``q`` holds the differences between the current computation and every
smaller same-input computation ending in ``q`` whose lag stayed within ``N``.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

from .core import (DEFAULT_CAP, TRANSDUCER, CapExceeded, Machine, Morphism, Transition)
from .freegroup import DROPPED, EPS, ZERO, ld_action, render_set
from .lexorder import TransitionOrder, default_order
from .oracle import count_successful, words_up_to

log = logging.getLogger(__name__)

LDVector = tuple[frozenset, ...]


@dataclass(frozen=True)
class SeparationParams:
    N: int
    n: int
    L: int
    h: int
    k: Optional[int] = None


@dataclass(frozen=True)
class LagSepResult:
    machine: Machine
    projection: Morphism
    vectors: tuple[LDVector, ...]
    params: SeparationParams
    order: TransitionOrder


def max_output_length(t: Machine) -> int:
    return max((len(e.out) for e in t.transitions), default=0)


def default_N(t: Machine, k: int) -> int:
    """Lag bound ``L * n^(k+1)`` beyond which the selection is input-k-ambiguous."""
    if k < 1:
        raise ValueError("k must be positive")
    return max_output_length(t) * t.n_states ** (k + 1)


def bounded(d, bound: int):
    if d is ZERO or d is DROPPED or len(d) > bound:
        return DROPPED
    return d


def smtrans_delta(t: Machine, order: TransitionOrder, e: int, N: int) -> LDVector:
    """Per end state, the bounded differences between ``e`` and smaller transitions of its class."""
    x = t.transitions[e].out
    sets: list[set] = [set() for _ in t.states]
    for f in order.smaller(e):
        g = t.transitions[f]
        d = bounded(ld_action(EPS, x, g.out), N)
        if d is not DROPPED:
            sets[g.dst].add(d)
    return tuple(frozenset(s) for s in sets)


def render_vector(t: Machine, v: LDVector) -> str:
    parts = [f"{t.states[q]}:{render_set(entry)}" for q, entry in enumerate(v) if entry]
    return "{" + ";".join(parts) + "}"


def lag_sep_covering(t: Machine, N: int, order: Optional[TransitionOrder] = None,
                     cap: int = DEFAULT_CAP, k: Optional[int] = None) -> LagSepResult:
    """Reachable part of the covering with vectors truncated to ``Delta_N``."""
    if t.kind != TRANSDUCER:
        raise ValueError("lag separation needs a transducer")
    if N < 0:
        raise ValueError("N must be non-negative")
    order = order or default_order(t)
    if order.machine != t:
        raise ValueError("order is not defined on this transducer")
    n = t.n_states
    params = SeparationParams(N, n, max_output_length(t), len(t.out_alphabet), k)
    bump = [smtrans_delta(t, order, e.id, N) for e in t.transitions]
    # outputs of a-transitions p -> q, as (q, y) per (p, a)
    moves: dict[tuple[int, str], list[tuple[int, str]]] = {}
    for e in t.transitions:
        moves.setdefault((e.src, e.label), []).append((e.dst, e.out))

    ids: dict[tuple[int, LDVector], int] = {}
    keys: list[tuple[int, LDVector]] = []
    todo: deque[int] = deque()

    def intern(key) -> int:
        sid = ids.get(key)
        if sid is None:
            if len(keys) >= cap:
                raise CapExceeded("lag separation covering", cap,
                                  f"2^(2hNk^2n) useful states, h={params.h} N={N} "
                                  f"k={k or 'k'} n={n}")
            sid = ids[key] = len(keys)
            keys.append(key)
            todo.append(sid)
        return sid

    initials = []
    earlier: list[set] = [set() for _ in range(n)]
    for p in order.ordered_initials():
        initials.append(intern((p, tuple(frozenset(s) for s in earlier))))
        earlier[p].add(EPS)

    @lru_cache(maxsize=None)
    def moved(s: int, entry: frozenset, a: str, x: str) -> tuple:
        # images of one vector entry along every a-transition leaving s
        out = []
        for r, y in moves.get((s, a), ()):
            for w in entry:
                d = bounded(ld_action(w, x, y), N)
                if d is not DROPPED:
                    out.append((r, d))
        return tuple(out)

    trans: list[Transition] = []
    back: list[int] = []
    carry_cache: dict = {}
    while todo:
        sid = todo.popleft()
        p, v = keys[sid]
        for e in t.outgoing[p]:
            edge = t.transitions[e]
            ck = (v, edge.label, edge.out)
            carried = carry_cache.get(ck)
            if carried is None:
                sets: list[set] = [set() for _ in range(n)]
                for s, entry in enumerate(v):
                    if entry:
                        for r, d in moved(s, entry, edge.label, edge.out):
                            sets[r].add(d)
                carried = carry_cache[ck] = sets
            w_vec = tuple(frozenset(c | b) for c, b in zip(carried, bump[e]))
            dst = intern((edge.dst, w_vec))
            trans.append(Transition(len(trans), sid, edge.label, dst, edge.out))
            back.append(e)

    states = tuple(f"{t.states[p]}__{render_vector(t, v)}" for p, v in keys)
    finals = frozenset(s for s, (p, _) in enumerate(keys) if p in t.finals)
    m = Machine(TRANSDUCER, t.alphabet, states, tuple(trans), tuple(initials), finals,
                t.out_alphabet, f"{t.name}_lagsep{N}")
    projection = Morphism(m, t, tuple(p for p, _ in keys), tuple(back))
    if k is not None:
        widest = max((len(entry) for _, v in keys for entry in v), default=0)
        if widest > k:
            log.info("vector entry with %d > k=%d elements (allowed on non-useful states)", widest, k)
    return LagSepResult(m, projection, tuple(v for _, v in keys), params, order)


def select_psi(res: LagSepResult) -> tuple[Machine, Morphism]:
    """Drop final status of states holding the empty difference against a final base state."""
    base = res.projection.target
    final_base = sorted(base.finals)
    keep = {s for s in res.machine.finals
            if not any(EPS in res.vectors[s][q] for q in final_base)}
    selected = res.machine.with_finals(keep, name=f"{base.name}_sel{res.params.N}")
    embed = Morphism(selected, res.machine, tuple(range(selected.n_states)),
                     tuple(range(selected.n_transitions)))
    proj = res.projection
    return selected, replace(proj.with_source(selected), completion=(embed, proj))


def ambiguity_certificate(selected: Machine, k: int, max_len: int) -> bool:
    """No input word of length <= ``max_len`` has more than ``k`` successful computations."""
    return all(count_successful(selected, u) <= k for u in words_up_to(selected.alphabet, max_len))


def useful_state_bound_log2(params: SeparationParams, k: int) -> int:
    """Exponent of the bound ``2^(2hNk^2n)`` on useful states of the selection."""
    return 2 * params.h * params.N * k * k * params.n
