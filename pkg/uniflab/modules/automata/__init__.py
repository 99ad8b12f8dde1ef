from uniflab.modules.automata.dfa import (
    BitSymbol, DEAD, EqAutomaton, ProductAutomaton, alphabet, xor_automaton,
    asym_xor_automaton, hom_automaton, asym_hom_automaton, const_automaton,
    zero_automaton, nonzero_automaton, copy_automaton, intersect, is_empty,
    strip_trailing_zeros, decode,
)
