"""Decomposition pipelines built from the two lexicographic coverings.

A k-valued transducer goes through the lag-separation covering, the
selection, and the multi-skimming covering of the selection's input
automaton; each skimming layer, with outputs lifted back, is one component.
The morphic variant then sticks every computation of the source onto the
components with the Lead-or-Delay product.
"""

from __future__ import annotations

import hashlib
import itertools
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .core import (AUTOMATON, DEFAULT_CAP, TRANSDUCER, CapExceeded, Machine, Morphism, Transition,
                   apply_output_morphism, canonical_completion, relabel_outputs, trim,
                   underlying_input_automaton)
from .freegroup import EPS, ZERO, ld_action, render
from .lagsep import default_N, lag_sep_covering, select_psi
from .lexorder import TransitionOrder, default_order
from .multiskim import multi_skim, skim_layers
from .oracle import count_successful, eval_relation, valuedness_up_to, words_up_to


class NotKValued(ValueError):
    pass


def lift_outputs(layer: Machine, selected: Machine, projection: Morphism) -> Machine:
    """Give each layer transition the output of its image in ``selected``.

    ``projection`` maps ``layer`` into the input automaton of ``selected``, which shares
    its transition ids with ``selected``.
    """
    if projection.source.n_transitions != layer.n_transitions:
        raise ValueError("morphism does not start at the layer")
    outs = [selected.transitions[projection.trans_map[t.id]].out for t in layer.transitions]
    trans = tuple(Transition(t.id, t.src, t.label, t.dst, out)
                  for t, out in zip(layer.transitions, outs))
    return Machine(TRANSDUCER, layer.alphabet, layer.states, trans, layer.initials,
                   layer.finals, selected.out_alphabet, layer.name)


def order_digest(order: TransitionOrder) -> str:
    data = ",".join(map(str, order.rank)) + "|" + ",".join(map(str, order.initial_rank))
    return hashlib.sha256(data.encode()).hexdigest()[:12]


@dataclass
class DecompositionResult:
    components: list[Machine]
    morphisms: list[Morphism]          # immersions into the source transducer
    metrics: dict[str, tuple[int, int]]
    params: dict[str, object]
    checks: dict[str, bool] = field(default_factory=dict)
    stages: dict[str, Machine] = field(default_factory=dict)

    def metrics_text(self) -> str:
        return "".join(f"{name}\t{s}\t{t}\n" for name, (s, t) in self.metrics.items())


def _size(m: Machine) -> tuple[int, int]:
    return (m.n_states, m.n_transitions)


def decompose_k_valued(t: Machine, k: int, N: Optional[int] = None,
                       order: Optional[TransitionOrder] = None,
                       skim_order: Optional[TransitionOrder] = None,
                       check_len: int = 8, verify: bool = True,
                       cap: int = DEFAULT_CAP) -> DecompositionResult:
    """Split ``t`` into ``k`` unambiguous functional transducers whose union realises ``t``.

    ``skim_order`` orders the transitions of the selection's input automaton
    (after trimming); by default transitions keep the covering's order.
    Bounded oracle checks up to ``check_len`` are run when ``verify`` is set.
    """
    if t.kind != TRANSDUCER:
        raise ValueError("decomposition needs a transducer")
    if k < 1:
        raise ValueError("k must be positive")
    if verify:
        val = valuedness_up_to(t, check_len)
        if val.value > k:
            raise NotKValued(f"not {k}-valued at desk scale: {val.value} values on {val.witness!r}")
    if N is None:
        N = default_N(t, k)
    order = order or default_order(t)

    lag_cover = lag_sep_covering(t, N, order, cap=cap, k=k)
    selected, selected_to_t = select_psi(lag_cover)
    selected_trim, selected_embed = trim(selected)
    a, _ = underlying_input_automaton(selected_trim)
    skim_order = skim_order or default_order(a)
    skim = multi_skim(a, k, skim_order, cap=cap)
    layers, rest = skim_layers(skim)

    # layer -> skim covering -> input automaton (ids shared with selected_trim) -> selected -> t
    to_t = selected_embed.then(selected_to_t)
    components, morphisms = [], []
    metrics = {"source": _size(t), "lagsep": _size(lag_cover.machine), "selected": _size(selected),
               "selected_trim": _size(selected_trim), "skim": _size(skim.machine)}
    for i, (layer, projection) in enumerate(layers):
        lifted = lift_outputs(layer, selected_trim, projection)
        comp, comp_embed = trim(lifted)
        comp = comp.renamed(f"{t.name}_component{i}")
        chain = comp_embed.with_source(comp).then(projection.with_source(lifted)).then(to_t)
        components.append(comp)
        morphisms.append(canonical_completion(chain))
        metrics[f"component_{i}"] = _size(comp)

    result = DecompositionResult(
        components, morphisms, metrics,
        {"k": k, "N": N, "order": order_digest(order), "skim_order": order_digest(skim_order)},
        stages={"lagsep": lag_cover.machine, "selected": selected,
                "selected_trim": selected_trim, "input": a,
                "skim": skim.machine, "rest": rest[0]})
    if verify:
        result.checks = check_decomposition(t, components, check_len)
        failed = [name for name, ok in result.checks.items() if not ok]
        if failed:
            warnings.warn(f"decomposition checks failed up to length {check_len}: {failed}")
    return result


def check_decomposition(t: Machine, components: list[Machine], max_len: int) -> dict[str, bool]:
    checks: dict[str, bool] = {}
    words = list(words_up_to(t.alphabet, max_len))
    for i, c in enumerate(components):
        checks[f"component_{i}_unambiguous"] = all(count_successful(c, u) <= 1 for u in words)
        checks[f"component_{i}_functional"] = all(len(eval_relation(c, u)) <= 1 for u in words)
    checks["union_equivalent"] = all(
        frozenset().union(*(eval_relation(c, u) for c in components)) == eval_relation(t, u)
        for u in words)
    return checks


@dataclass(frozen=True)
class PowerTransducer:
    """Cartesian power: computations are tuples of same-input computations of ``base``."""

    machine: Machine                     # input automaton over tuples of states
    base: Machine
    coords: tuple[tuple[int, ...], ...]  # per transition, the base transition ids

    def outputs(self, tid: int) -> tuple[str, ...]:
        return tuple(self.base.transitions[e].out for e in self.coords[tid])

    def project(self, path, i: int) -> tuple[int, ...]:
        return tuple(self.coords[t][i] for t in path)


def cartesian_power(t: Machine, m: int, cap: int = DEFAULT_CAP) -> PowerTransducer:
    """Reachable part of ``t^m``; initial/final componentwise."""
    if m < 1:
        raise ValueError("power must be positive")
    ids: dict[tuple[int, ...], int] = {}
    keys: list[tuple[int, ...]] = []
    todo: deque[int] = deque()

    def intern(key):
        sid = ids.get(key)
        if sid is None:
            if len(keys) >= cap:
                raise CapExceeded("cartesian power", cap, f"n^m = {t.n_states ** m}")
            sid = ids[key] = len(keys)
            keys.append(key)
            todo.append(sid)
        return sid

    initials = [intern(key) for key in itertools.product(t.initials, repeat=m)]
    trans, coords = [], []
    while todo:
        sid = todo.popleft()
        key = keys[sid]
        for a in t.alphabet:
            choices = [t.step(p, a) for p in key]
            for combo in itertools.product(*choices):
                dst = intern(tuple(t.transitions[e].dst for e in combo))
                trans.append(Transition(len(trans), sid, a, dst))
                coords.append(combo)
    states = tuple("(" + ",".join(t.states[p] for p in key) + ")" for key in keys)
    finals = frozenset(s for s, key in enumerate(keys) if all(p in t.finals for p in key))
    power = Machine(AUTOMATON, t.alphabet, states, tuple(trans), tuple(initials), finals,
                    (), f"{t.name}^{m}")
    return PowerTransducer(power, t, tuple(coords))


def in_delta(d, bound: int) -> bool:
    return d is not ZERO and len(d) <= bound


def ld_product(t: Machine, u: Machine, K: int, cap: int = DEFAULT_CAP) -> tuple[Machine, Morphism]:
    """Product of ``t`` and ``u`` tracking the Lead or Delay of ``u``'s output against ``t``'s.

    Only differences in ``Delta_K`` are kept. Outputs are ``t``'s; a state is
    final when both sides are final and the outputs agree. The morphism
    projects onto ``t``.
    """
    if t.kind != TRANSDUCER or u.kind != TRANSDUCER:
        raise ValueError("ld_product needs two transducers")
    ids: dict = {}
    keys: list = []
    todo: deque[int] = deque()

    def intern(key):
        sid = ids.get(key)
        if sid is None:
            if len(keys) >= cap:
                raise CapExceeded("Lead-or-Delay product", cap)
            sid = ids[key] = len(keys)
            keys.append(key)
            todo.append(sid)
        return sid

    initials = [intern((p, q, EPS)) for p in t.initials for q in u.initials]
    trans, back = [], []
    while todo:
        sid = todo.popleft()
        p, q, w = keys[sid]
        for e in t.outgoing[p]:
            te = t.transitions[e]
            for f in u.step(q, te.label):
                uf = u.transitions[f]
                w2 = ld_action(w, te.out, uf.out)
                if not in_delta(w2, K):
                    continue
                dst = intern((te.dst, uf.dst, w2))
                trans.append(Transition(len(trans), sid, te.label, dst, te.out))
                back.append(e)
    states = tuple(f"{t.states[p]}|{u.states[q]}|{render(w)}" for p, q, w in keys)
    finals = frozenset(s for s, (p, q, w) in enumerate(keys)
                       if p in t.finals and q in u.finals and w == EPS)
    m = Machine(TRANSDUCER, t.alphabet, states, tuple(trans), tuple(initials), finals,
                t.out_alphabet, f"{t.name}_x_{u.name}")
    return m, Morphism(m, t, tuple(p for p, _, _ in keys), tuple(back))


@dataclass
class MorphicDecomposition:
    components: list[Machine]
    morphisms: list[Morphism]        # into the source S
    image: Machine                   # S with outputs mapped through letter_map
    base: DecompositionResult
    K: int
    checks: dict[str, bool] = field(default_factory=dict)


def compose_outputs(m: Machine, letter_map: Mapping[str, str]) -> Machine:
    return apply_output_morphism(m, letter_map)[0]


def morphic_decompose(s: Machine, letter_map: Mapping[str, str], k: int, check_len: int = 8,
                      N: Optional[int] = None, order: Optional[TransitionOrder] = None,
                      cap: int = DEFAULT_CAP, verify: bool = True) -> MorphicDecomposition:
    """Split ``s`` into ``k`` transducers whose compositions with the letter map are functional."""
    t, provenance = apply_output_morphism(s, letter_map)
    if verify:
        val = valuedness_up_to(t, check_len)
        if val.value > k:
            raise NotKValued(f"composition with the letter map is not {k}-valued at desk scale: "
                             f"{val.value} values on {val.witness!r}")
    if N is None:
        N = default_N(t, k)
    if order is not None:
        # same transition ids on both sides of the relabelling
        order = TransitionOrder(t, order.rank, order.initial_rank)
    base = decompose_k_valued(t, k, N=N, order=order, check_len=check_len, verify=verify, cap=cap)
    K = 2 * (k + 1) * N
    components, morphisms = [], []
    for i, part in enumerate(base.components):
        w, w_to_t = ld_product(t, part, K, cap=cap)
        w, w_embed = trim(w)
        w_to_t = w_embed.then(w_to_t)
        # step back to the outputs of s through the transition provenance
        outs = [s.transitions[provenance[w_to_t.trans_map[e.id]]].out for e in w.transitions]
        comp = relabel_outputs(w, outs, s.out_alphabet).renamed(f"{s.name}_component{i}")
        to_s = Morphism(comp, s, w_to_t.state_map, tuple(provenance[e] for e in w_to_t.trans_map))
        components.append(comp)
        morphisms.append(to_s)
    result = MorphicDecomposition(components, morphisms, t, base, K)
    if verify:
        result.checks = check_morphic(s, letter_map, components, check_len)
        failed = [name for name, ok in result.checks.items() if not ok]
        if failed:
            warnings.warn(f"morphic decomposition checks failed up to length {check_len}: {failed}")
    return result


def check_morphic(s: Machine, letter_map, components: list[Machine], max_len: int) -> dict[str, bool]:
    checks = {}
    words = list(words_up_to(s.alphabet, max_len))
    for i, c in enumerate(components):
        composed = compose_outputs(c, letter_map)
        checks[f"component_{i}_mapped_functional"] = all(
            len(eval_relation(composed, u)) <= 1 for u in words)
    checks["union_equivalent"] = all(
        frozenset().union(*(eval_relation(c, u) for c in components)) == eval_relation(s, u)
        for u in words)
    return checks
