"""Lexicographic coverings of automata and the decomposition of k-valued transducers."""

from .core import (AUTOMATON, NAUTOMATON, TRANSDUCER, CapExceeded, Machine, Morphism,
                   Transition, Unverifiable, apply_output_morphism, canonical_completion,
                   identity_morphism, label_matrix, make_machine, split_multiplicities, trim,
                   underlying_input_automaton, validate, verify_morphism)
from .decompose import (cartesian_power, decompose_k_valued, ld_product, lift_outputs,
                        morphic_decompose)
from .lagsep import ambiguity_certificate, default_N, lag_sep_covering, select_psi
from .lexorder import Cmp, Computation, TransitionOrder, default_order, lex_compare
from .multiskim import multi_skim, skim_layers
from .textio import parse_machine, serialize_machine

__all__ = [
    "AUTOMATON", "NAUTOMATON", "TRANSDUCER", "CapExceeded", "Cmp", "Computation", "Machine",
    "Morphism", "Transition", "TransitionOrder", "Unverifiable", "ambiguity_certificate",
    "apply_output_morphism", "canonical_completion", "cartesian_power", "decompose_k_valued",
    "default_N", "default_order", "identity_morphism", "label_matrix", "lag_sep_covering",
    "ld_product", "lex_compare", "lift_outputs", "make_machine", "morphic_decompose",
    "multi_skim", "parse_machine", "select_psi", "serialize_machine", "skim_layers",
    "split_multiplicities", "trim", "underlying_input_automaton", "validate", "verify_morphism",
]

__version__ = "0.1.0"
