"""Line-based text format for machines.

::

    transducer shifted
    alphabet a
    outalphabet b
    states p q
    initial p
    final p q
    trans p a/b p
    trans p a/bb q
    trans q a/- p

``-`` is the empty output, ``*m`` a multiplicity, ``#`` starts a comment.
Transition order in the file is the transition id order.
"""

from __future__ import annotations

from pathlib import Path

from .core import KINDS, NAUTOMATON, TRANSDUCER, Machine, Transition, validate


class ParseError(ValueError):
    pass


def parse_machine(text: str) -> Machine:
    kind = name = None
    alphabet: list[str] = []
    out_alphabet: list[str] = []
    states: list[str] = []
    initials: list[str] = []
    finals: list[str] = []
    raw_trans: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        head, items = tokens[0], tokens[1:]
        if kind is None:
            if head not in KINDS:
                raise ParseError(f"line {lineno}: expected a header ({'|'.join(KINDS)})")
            kind = head
            name = items[0] if items else "M"
            if len(items) > 1:
                raise ParseError(f"line {lineno}: header takes one name")
        elif head == "alphabet":
            alphabet += items
        elif head == "outalphabet":
            out_alphabet += items
        elif head == "states":
            states += items
        elif head == "initial":
            initials += items
        elif head == "final":
            finals += items
        elif head == "trans":
            raw_trans.append((lineno, items))
        else:
            raise ParseError(f"line {lineno}: unknown keyword {head!r}")
    if kind is None:
        raise ParseError("empty input: missing header")

    index = {s: i for i, s in enumerate(states)}

    def state(lineno, s):
        if s not in index:
            raise ParseError(f"line {lineno}: undeclared state {s!r}")
        return index[s]

    trans = []
    for lineno, items in raw_trans:
        mult = 1
        if len(items) == 4 and items[3].startswith("*"):
            try:
                mult = int(items[3][1:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad multiplicity {items[3]!r}") from None
            items = items[:3]
        if len(items) != 3:
            raise ParseError(f"line {lineno}: expected 'trans SRC LABEL DST [*m]'")
        src, label, dst = items
        out = None
        if kind == TRANSDUCER:
            if "/" not in label:
                raise ParseError(f"line {lineno}: transducer label needs 'in/out'")
            label, out = label.split("/", 1)
            out = "" if out == "-" else out
        if label == "-":
            label = ""
        trans.append(Transition(len(trans), state(lineno, src), label,
                                state(lineno, dst), out, mult))
    m = Machine(kind, tuple(alphabet), tuple(states), tuple(trans),
                tuple(state(0, s) for s in initials),
                frozenset(state(0, s) for s in finals), tuple(out_alphabet), name)
    errors = validate(m)
    if errors:
        raise ParseError("invalid machine: " + "; ".join(errors))
    return m


def serialize_machine(m: Machine) -> str:
    lines = [f"{m.kind} {m.name}",
             " ".join(["alphabet", *m.alphabet])]
    if m.kind == TRANSDUCER:
        lines.append(" ".join(["outalphabet", *m.out_alphabet]))
    lines.append(" ".join(["states", *m.states]))
    lines.append(" ".join(["initial", *(m.states[s] for s in m.initials)]))
    lines.append(" ".join(["final", *(m.states[s] for s in sorted(m.finals))]))
    for t in m.transitions:
        label = t.label or "-"
        if m.kind == TRANSDUCER:
            label += "/" + (t.out or "-")
        line = f"trans {m.states[t.src]} {label} {m.states[t.dst]}"
        if m.kind == NAUTOMATON and t.mult != 1:
            line += f" *{t.mult}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def read_machine(path) -> Machine:
    return parse_machine(Path(path).read_text())


def write_machine(m: Machine, path) -> None:
    Path(path).write_text(serialize_machine(m))
