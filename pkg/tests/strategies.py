"""Hypothesis strategies for small machines."""

from hypothesis import strategies as st

from kvalued.core import AUTOMATON, NAUTOMATON, TRANSDUCER, Machine, Transition


@st.composite
def machines(draw, kind=NAUTOMATON, max_states=3, alphabet="ab", out_alphabet="bc",
             max_out=2, max_trans=7, max_mult=3, max_initials=1):
    n = draw(st.integers(1, max_states))
    triples = st.tuples(st.integers(0, n - 1), st.sampled_from(alphabet), st.integers(0, n - 1))
    raw = draw(st.lists(triples, max_size=max_trans))
    trans = []
    for src, a, dst in raw:
        out, mult = None, 1
        if kind == TRANSDUCER:
            out = draw(st.text(alphabet=out_alphabet, max_size=max_out))
        elif kind == NAUTOMATON:
            mult = draw(st.integers(1, max_mult))
        trans.append(Transition(len(trans), src, a, dst, out, mult))
    initials = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=max_initials,
                             unique=True))
    finals = draw(st.frozensets(st.integers(0, n - 1), min_size=1))
    return Machine(kind, tuple(alphabet), tuple(f"s{i}" for i in range(n)), tuple(trans),
                   tuple(initials), finals, tuple(out_alphabet) if kind == TRANSDUCER else (),
                   "H")


def automata(**kw):
    return machines(kind=AUTOMATON, **kw)


def transducers(**kw):
    return machines(kind=TRANSDUCER, **kw)
