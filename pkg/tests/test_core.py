import random
from dataclasses import replace

import pytest
from hypothesis import given, settings

from kvalued.core import (AUTOMATON, TRANSDUCER, Morphism, Transition, Unverifiable,
                          apply_output_morphism, canonical_completion, identity_morphism,
                          label_matrix, make_machine, split_multiplicities, trim,
                          underlying_input_automaton, validate, verify_morphism)
from kvalued.machines import shifted_copy
from kvalued.multiskim import multi_skim
from kvalued.oracle import (accepts, count_successful, eval_relation, eval_series,
                            words_up_to)

from .strategies import machines, transducers


def test_validate_reference_machines(shifted, counter, shifted_source):
    assert validate(shifted) == []
    assert validate(counter) == []
    assert validate(shifted_source) == []


def test_validate_undeclared_state(counter):
    bad = replace(counter, transitions=counter.transitions + (Transition(5, 0, "a", 7),))
    assert len(validate(bad)) == 1


def test_validate_empty_input_transition(shifted):
    bad = replace(shifted, transitions=shifted.transitions + (Transition(3, 0, "", 1, "b"),))
    errs = validate(bad)
    assert len(errs) == 1 and "single letter" in errs[0]


def test_validate_multiplicity_outside_nautomata():
    m = make_machine(AUTOMATON, "a", ["p"], [("p", "a", "p", 2)], ["p"], ["p"])
    assert len(validate(m)) == 1


def test_trim_keeps_useful_machine(shifted):
    out, emb = trim(shifted)
    assert out == shifted
    assert emb.state_map == (0, 1)


def test_trim_removes_isolated_state():
    m = make_machine(AUTOMATON, "a", ["p", "q", "z"], [("p", "a", "q")], ["p"], ["q"])
    out, emb = trim(m)
    assert out.states == ("p", "q")
    assert verify_morphism(emb)


def test_trim_empty_result():
    m = make_machine(AUTOMATON, "a", ["p", "q"], [("p", "a", "p")], ["p"], ["q"])
    out, _ = trim(m)
    assert out.n_states == 0 and out.initials == () and validate(out) == []


def test_split_parallel_copies(counter):
    split, back = split_multiplicities(counter)
    loops = [t for t in split.transitions if t.src == t.dst == 1 and t.label == "a"]
    assert len(loops) == 2 and all(t.mult == 1 for t in loops)
    assert back.trans_map == (0, 1, 2, 3, 3, 4, 4)
    assert verify_morphism(back)


def test_split_of_characteristic_is_copy(shifted):
    a, _ = underlying_input_automaton(shifted)
    assert split_multiplicities(a)[0] == a


def test_split_triple_preserves_series():
    m = make_machine("nautomaton", "ab", ["p", "q"], [("p", "a", "q", 3), ("q", "b", "q")],
                     ["p"], ["q"])
    split, _ = split_multiplicities(m)
    assert split.n_transitions == 4
    rng = random.Random(7)
    for _ in range(5):
        u = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        assert eval_series(split, u) == eval_series(m, u)


@settings(max_examples=40, deadline=None)
@given(machines(max_states=3))
def test_split_and_trim_preserve_series(m):
    split, _ = split_multiplicities(m)
    trimmed, _ = trim(m)
    for u in words_up_to("ab", 6):
        assert eval_series(split, u) == eval_series(m, u) == eval_series(trimmed, u)


@settings(max_examples=40, deadline=None)
@given(transducers(max_states=3))
def test_trim_preserves_relation_and_input_automaton_is_domain(t):
    trimmed, _ = trim(t)
    a, _ = underlying_input_automaton(t)
    for u in words_up_to("ab", 5):
        rel = eval_relation(t, u)
        assert eval_relation(trimmed, u) == rel
        assert accepts(a, u) == bool(rel)


def test_underlying_input_automaton(shifted, selection):
    a, bij = underlying_input_automaton(shifted)
    assert a.kind == AUTOMATON and bij == (0, 1, 2)
    assert [(e.src, e.label, e.dst) for e in a.transitions] == [(0, "a", 0), (0, "a", 1), (1, "a", 0)]
    empty = make_machine(TRANSDUCER, "a", ["p"], [], ["p"], ["p"], "b")
    assert underlying_input_automaton(empty)[0].transitions == ()
    av, _ = underlying_input_automaton(selection)
    assert av.n_states == 2
    assert [(e.src, e.dst) for e in av.transitions] == [(0, 0), (0, 1)]


def test_label_matrix(counter, shifted):
    assert label_matrix(counter, "a") == ((1, 0), (0, 2))
    assert label_matrix(counter, "b") == ((1, 1), (0, 2))
    mat = label_matrix(shifted, "a")
    assert mat[0][0] == {"b"} and mat[0][1] == {"bb"} and mat[1][0] == {""}
    assert mat[1][1] == frozenset()
    with pytest.raises(ValueError):
        label_matrix(counter, "z")


def test_identity_is_every_kind(shifted):
    ident = identity_morphism(shifted)
    for kind in ("morphism", "covering", "immersion"):
        assert verify_morphism(ident, kind)


def test_skim_projection_is_covering(counter):
    res = multi_skim(counter, 3)
    assert verify_morphism(res.projection, "covering")


def test_dropping_an_outgoing_transition_breaks_covering(counter):
    res = multi_skim(counter, 3)
    b = res.machine
    drop = b.outgoing[0][0]
    kept = [t for t in b.transitions if t.id != drop]
    renum = tuple(replace(t, id=i) for i, t in enumerate(kept))
    smaller = replace(b, transitions=renum)
    f = Morphism(smaller, res.base, res.projection.state_map,
                 tuple(res.projection.trans_map[t.id] for t in kept))
    assert verify_morphism(f, "morphism")
    assert not verify_morphism(f, "covering")
    assert verify_morphism(canonical_completion(f), "immersion")


def test_immersion_needs_completion(shifted):
    f = Morphism(shifted, shifted, (0, 1), (0, 1, 2))
    with pytest.raises(Unverifiable):
        verify_morphism(f, "immersion")


def test_non_locally_injective_map_is_not_immersion():
    a = make_machine(AUTOMATON, "a", ["p"], [("p", "a", "p"), ("p", "a", "p")], ["p"], ["p"])
    b = make_machine(AUTOMATON, "a", ["p"], [("p", "a", "p")], ["p"], ["p"])
    f = Morphism(a, b, (0,), (0, 0))
    assert verify_morphism(f)
    assert not verify_morphism(canonical_completion(f), "immersion")


def test_apply_output_morphism(shifted_source, shifted):
    t, prov = apply_output_morphism(shifted_source, {"b": "b", "c": "b"})
    assert prov == (0, 1, 2)
    assert [(e.src, e.label, e.out, e.dst) for e in t.transitions] == \
        [(e.src, e.label, e.out, e.dst) for e in shifted.transitions]
    ident, _ = apply_output_morphism(shifted, {"b": "b"})
    assert ident.transitions == shifted.transitions
    erased, _ = apply_output_morphism(shifted, {"b": ""})
    assert all(e.out == "" for e in erased.transitions)
    with pytest.raises(ValueError):
        apply_output_morphism(shifted_source, {"b": "b"})


def test_covering_counts_match_on_split(counter):
    res = multi_skim(counter, 2)
    for u in words_up_to("ab", 6):
        assert count_successful(res.machine, u) == count_successful(res.base, u)


def test_make_machine_matches_parser():
    t = make_machine(TRANSDUCER, "a", ["p", "q"],
                     [("p", "a", "q", "b"), ("p", "a", "q", "bb"), ("q", "a", "p", "")],
                     ["p"], ["p", "q"], "b", name="T")
    assert validate(t) == []
    assert eval_relation(t, "a") == {"b", "bb"}
    assert shifted_copy().n_transitions == 3
