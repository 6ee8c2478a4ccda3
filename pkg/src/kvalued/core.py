"""Machines (automata, real-time transducers, N-automata) and morphisms between them.

States and transitions are dense integer ids assigned in declaration order.
Parallel transitions with the same (origin, label, end) are distinct objects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Optional, Sequence

AUTOMATON = "automaton"
TRANSDUCER = "transducer"
NAUTOMATON = "nautomaton"
KINDS = (AUTOMATON, TRANSDUCER, NAUTOMATON)

# letters that clash with the text format or with Delta rendering
RESERVED = set("-/*#_~.{}:;,") | {""}

DEFAULT_CAP = 200_000


class CapExceeded(RuntimeError):
    """A construction or an enumeration grew past its configured cap."""

    def __init__(self, what: str, cap: int, bound: Optional[str] = None):
        msg = f"{what} exceeded cap of {cap}"
        if bound:
            msg += f" (theoretical bound: {bound})"
        super().__init__(msg)
        self.cap = cap
        self.bound = bound


class Unverifiable(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    id: int
    src: int
    label: str
    dst: int
    out: Optional[str] = None
    mult: int = 1


@dataclass(frozen=True)
class Machine:
    kind: str
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initials: tuple[int, ...]
    finals: frozenset[int]
    out_alphabet: tuple[str, ...] = ()
    name: str = "M"

    @cached_property
    def outgoing(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.states]
        for t in self.transitions:
            if 0 <= t.src < len(out):
                out[t.src].append(t.id)
        return tuple(tuple(ts) for ts in out)

    @cached_property
    def by_letter(self) -> dict[tuple[int, str], tuple[int, ...]]:
        table: dict[tuple[int, str], list[int]] = {}
        for t in self.transitions:
            table.setdefault((t.src, t.label), []).append(t.id)
        return {key: tuple(ts) for key, ts in table.items()}

    def step(self, state: int, letter: str) -> tuple[int, ...]:
        return self.by_letter.get((state, letter), ())

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    @property
    def is_characteristic(self) -> bool:
        return all(t.mult == 1 for t in self.transitions)

    def with_finals(self, finals, name: Optional[str] = None) -> "Machine":
        return replace(self, finals=frozenset(finals), name=name or self.name)

    def renamed(self, name: str) -> "Machine":
        return replace(self, name=name)

    def state_index(self, name: str) -> int:
        return self.states.index(name)


def make_machine(kind, alphabet, states, transitions, initials, finals,
                 out_alphabet=(), name="M") -> Machine:
    """Build a machine from state names.

    ``transitions`` holds tuples ``(src, label, dst)`` plus, for transducers,
    a fourth item (the output word) and, for N-automata, an optional fourth
    item (the multiplicity).
    """
    states = tuple(states)
    index = {s: i for i, s in enumerate(states)}
    trans = []
    for tid, item in enumerate(transitions):
        src, label, dst, *rest = item
        out, mult = None, 1
        if kind == TRANSDUCER:
            out = rest[0] if rest else ""
        elif rest:
            mult = rest[0]
        trans.append(Transition(tid, index[src], label, index[dst], out, mult))
    return Machine(kind, tuple(alphabet), states, tuple(trans),
                   tuple(index[s] for s in initials),
                   frozenset(index[s] for s in finals),
                   tuple(out_alphabet), name)


def validate(m: Machine) -> list[str]:
    """Return the list of invariant violations of ``m`` (empty when valid)."""
    errs = []
    if m.kind not in KINDS:
        errs.append(f"unknown machine kind {m.kind!r}")
    n = m.n_states
    if len(set(m.states)) != n:
        errs.append("duplicate state names")
    for name in m.states:
        if not name or any(c.isspace() or c == "#" for c in name):
            errs.append(f"bad state name {name!r}")
    for alpha, what in ((m.alphabet, "alphabet"), (m.out_alphabet, "output alphabet")):
        if len(set(alpha)) != len(alpha):
            errs.append(f"duplicate letters in {what}")
        for a in alpha:
            if len(a) != 1 or a in RESERVED or a.isspace():
                errs.append(f"bad letter {a!r} in {what}")
    if m.kind != TRANSDUCER and m.out_alphabet:
        errs.append("output alphabet declared on a non-transducer")
    letters, out_letters = set(m.alphabet), set(m.out_alphabet)
    for pos, t in enumerate(m.transitions):
        where = f"transition {pos}"
        if t.id != pos:
            errs.append(f"{where}: id {t.id} is not its position")
        if not (0 <= t.src < n and 0 <= t.dst < n):
            errs.append(f"{where}: undeclared state")
        if len(t.label) != 1:
            errs.append(f"{where}: input label {t.label!r} is not a single letter")
        elif t.label not in letters:
            errs.append(f"{where}: letter {t.label!r} not in alphabet")
        if m.kind == TRANSDUCER:
            if t.out is None:
                errs.append(f"{where}: missing output")
            elif any(c not in out_letters for c in t.out):
                errs.append(f"{where}: output {t.out!r} not over the output alphabet")
        elif t.out is not None:
            errs.append(f"{where}: output on a non-transducer")
        if not isinstance(t.mult, int) or t.mult < 1:
            errs.append(f"{where}: multiplicity {t.mult!r} is not a positive integer")
        elif t.mult != 1 and m.kind != NAUTOMATON:
            errs.append(f"{where}: multiplicity on a non-N-automaton")
    if len(set(m.initials)) != len(m.initials):
        errs.append("duplicate initial states")
    if any(not 0 <= s < n for s in m.initials):
        errs.append("undeclared initial state")
    if any(not 0 <= s < n for s in m.finals):
        errs.append("undeclared final state")
    return errs


@dataclass(frozen=True)
class Morphism:
    """State map and transition map from ``source`` to ``target``.

    ``completion`` optionally records a factorisation ``source -> C -> target``
    where the first arrow embeds ``source`` as a subautomaton of ``C`` and the
    second is a covering; it is what makes an immersion checkable.
    """

    source: Machine
    target: Machine
    state_map: tuple[int, ...]
    trans_map: tuple[int, ...]
    completion: Optional[tuple["Morphism", "Morphism"]] = None

    def then(self, other: "Morphism") -> "Morphism":
        """Composite ``source -> other.target`` (no completion carried over)."""
        return Morphism(self.source, other.target,
                        tuple(other.state_map[s] for s in self.state_map),
                        tuple(other.trans_map[t] for t in self.trans_map))

    def with_source(self, source: Machine) -> "Morphism":
        return replace(self, source=source, completion=None)


def identity_morphism(m: Machine) -> Morphism:
    ident = Morphism(m, m, tuple(range(m.n_states)), tuple(range(m.n_transitions)))
    return replace(ident, completion=(ident, ident))


def trim(m: Machine) -> tuple[Machine, Morphism]:
    """Keep the useful states; the morphism embeds the result into ``m``."""
    forward = _reach(m.initials, lambda s: (m.transitions[t].dst for t in m.outgoing[s]))
    incoming: list[list[int]] = [[] for _ in m.states]
    for t in m.transitions:
        incoming[t.dst].append(t.src)
    backward = _reach(m.finals, lambda s: incoming[s])
    useful = [s for s in range(m.n_states) if s in forward and s in backward]
    new_id = {s: i for i, s in enumerate(useful)}
    kept = [t for t in m.transitions if t.src in new_id and t.dst in new_id]
    trans = tuple(replace(t, id=i, src=new_id[t.src], dst=new_id[t.dst])
                  for i, t in enumerate(kept))
    out = replace(m, states=tuple(m.states[s] for s in useful), transitions=trans,
                  initials=tuple(new_id[s] for s in m.initials if s in new_id),
                  finals=frozenset(new_id[s] for s in m.finals if s in new_id))
    return out, Morphism(out, m, tuple(useful), tuple(t.id for t in kept))


def _reach(start, succ) -> set[int]:
    seen = set(start)
    todo = deque(seen)
    while todo:
        s = todo.popleft()
        for r in succ(s):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def split_multiplicities(m: Machine) -> tuple[Machine, Morphism]:
    """Replace each multiplicity-``k`` transition by ``k`` parallel copies."""
    trans, back = [], []
    for t in m.transitions:
        for _ in range(t.mult):
            trans.append(replace(t, id=len(trans), mult=1))
            back.append(t.id)
    out = replace(m, transitions=tuple(trans))
    return out, Morphism(out, m, tuple(range(m.n_states)), tuple(back))


def underlying_input_automaton(t: Machine) -> tuple[Machine, tuple[int, ...]]:
    """Forget outputs. Ids are kept, so the bijection is the identity."""
    trans = tuple(replace(e, out=None, mult=1) for e in t.transitions)
    a = replace(t, kind=AUTOMATON, transitions=trans, out_alphabet=(),
                name=f"{t.name}_in")
    return a, tuple(range(t.n_transitions))


def label_matrix(m: Machine, letter: str) -> tuple[tuple, ...]:
    """Entry (p, q): summed multiplicity, or the set of outputs for transducers."""
    if letter not in m.alphabet:
        raise ValueError(f"letter {letter!r} not in alphabet")
    n = m.n_states
    if m.kind == TRANSDUCER:
        sets = [[set() for _ in range(n)] for _ in range(n)]
        for t in m.transitions:
            if t.label == letter:
                sets[t.src][t.dst].add(t.out)
        return tuple(tuple(frozenset(e) for e in row) for row in sets)
    counts = [[0] * n for _ in range(n)]
    for t in m.transitions:
        if t.label == letter:
            counts[t.src][t.dst] += t.mult
    return tuple(tuple(row) for row in counts)


def apply_output_morphism(s: Machine,
                          letter_map: Mapping[str, str]) -> tuple[Machine, tuple[int, ...]]:
    """Replace every output ``x`` by its image under the letter-to-word map ``letter_map``."""
    if s.kind != TRANSDUCER:
        raise ValueError("output morphism needs a transducer")
    missing = [b for b in s.out_alphabet if b not in letter_map]
    if missing:
        raise ValueError(f"letter map undefined on {missing}")
    out_alpha: list[str] = []
    for b in s.out_alphabet:
        for c in letter_map[b]:
            if c not in out_alpha:
                out_alpha.append(c)
    trans = tuple(replace(t, out="".join(letter_map[c] for c in t.out)) for t in s.transitions)
    t = replace(s, transitions=trans, out_alphabet=tuple(out_alpha), name=f"{s.name}_mapped")
    return t, tuple(range(s.n_transitions))


def _same_label(a: Transition, b: Transition) -> bool:
    # multiplicities are not part of the label: coverings are checked on split forms
    return a.label == b.label and a.out == b.out


def _is_morphism(f: Morphism) -> bool:
    src, tgt = f.source, f.target
    if len(f.state_map) != src.n_states or len(f.trans_map) != src.n_transitions:
        return False
    if any(not 0 <= q < tgt.n_states for q in f.state_map):
        return False
    if any(not 0 <= e < tgt.n_transitions for e in f.trans_map):
        return False
    for t in src.transitions:
        e = tgt.transitions[f.trans_map[t.id]]
        if not _same_label(t, e):
            return False
        if f.state_map[t.src] != e.src or f.state_map[t.dst] != e.dst:
            return False
    tgt_init = set(tgt.initials)
    if any(f.state_map[s] not in tgt_init for s in src.initials):
        return False
    return all(f.state_map[s] in tgt.finals for s in src.finals)


def _is_covering(f: Morphism) -> bool:
    if not _is_morphism(f):
        return False
    src, tgt = f.source, f.target
    for r in range(src.n_states):
        images = sorted(f.trans_map[t] for t in src.outgoing[r])
        if images != sorted(tgt.outgoing[f.state_map[r]]):
            return False
    init_images = [f.state_map[s] for s in src.initials]
    if sorted(init_images) != sorted(tgt.initials):
        return False
    return all((r in src.finals) == (f.state_map[r] in tgt.finals)
               for r in range(src.n_states))


def _is_embedding(f: Morphism) -> bool:
    return (_is_morphism(f)
            and len(set(f.state_map)) == len(f.state_map)
            and len(set(f.trans_map)) == len(f.trans_map))


def verify_morphism(f: Morphism, kind: str = "morphism") -> bool:
    """Check ``f`` as a ``morphism``, a ``covering`` or an ``immersion``.

    Immersions are checked through the recorded completion; without one the
    check raises :class:`Unverifiable` (see :func:`canonical_completion`).
    """
    if kind == "morphism":
        return _is_morphism(f)
    if kind == "covering":
        return _is_covering(f)
    if kind != "immersion":
        raise ValueError(f"unknown morphism kind {kind!r}")
    if f.completion is None:
        raise Unverifiable("immersion check needs a recorded completion")
    embed, cover = f.completion
    if embed.source != f.source or cover.target != f.target or embed.target != cover.source:
        return False
    if not (_is_embedding(embed) and _is_covering(cover)):
        return False
    composite = embed.then(cover)
    return (_is_morphism(f) and composite.state_map == f.state_map
            and composite.trans_map == f.trans_map)


def canonical_completion(f: Morphism) -> Morphism:
    """Attach the standard completion of ``f`` to a covering of ``f.target``.

    The completion is ``source`` plus a disjoint copy of ``target``; every
    target transition missing from the image of a source state's outgoing
    transitions is added as an edge into the copy. The result is a covering
    exactly when ``f`` is locally injective (and injective on initials), so
    verifying the immersion afterwards is meaningful.
    """
    src, tgt = f.source, f.target
    n = src.n_states
    states = src.states + tuple(f"{s}'copy" for s in tgt.states)
    trans = list(src.transitions)
    cover_trans = list(f.trans_map)

    def add(a, e: Transition, b):
        trans.append(Transition(len(trans), a, e.label, b, e.out, e.mult))
        cover_trans.append(e.id)

    for r in range(n):
        hit = {f.trans_map[t] for t in src.outgoing[r]}
        for e in tgt.outgoing[f.state_map[r]]:
            if e not in hit:
                add(r, tgt.transitions[e], n + tgt.transitions[e].dst)
    for e in tgt.transitions:
        add(n + e.src, e, n + e.dst)
    hit_init = {f.state_map[s] for s in src.initials}
    initials = src.initials + tuple(n + s for s in tgt.initials if s not in hit_init)
    finals = {r for r in range(n) if f.state_map[r] in tgt.finals}
    finals |= {n + s for s in tgt.finals}
    c = Machine(src.kind, src.alphabet, states, tuple(trans), initials,
                frozenset(finals), src.out_alphabet, f"{src.name}_completion")
    embed = Morphism(src, c, tuple(range(n)), tuple(range(src.n_transitions)))
    cover = Morphism(c, tgt, f.state_map + tuple(range(tgt.n_states)), tuple(cover_trans))
    return replace(f, completion=(embed, cover))


def relabel_outputs(m: Machine, outputs: Sequence[str], out_alphabet) -> Machine:
    trans = tuple(replace(t, out=o) for t, o in zip(m.transitions, outputs))
    return replace(m, transitions=trans, out_alphabet=tuple(out_alphabet))
