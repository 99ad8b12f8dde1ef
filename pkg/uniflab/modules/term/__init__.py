from uniflab.modules.term.term import (
    Symbol, Var, Const, App, Term, Substitution, Signature, ZERO, PLUS,
    mk_app, plus, h_power, canonical, apply_subst, compose, subterms, subterm_at,
    instantiate, replace_at, variables, constants, term_size, term_depth, is_ground, print_term,
    format_substitution, sort_key, term_order, summands, is_sum,
)
from uniflab.modules.term.parser import parse_term, tokenize
from uniflab.modules.term.problem import (
    Item, Problem, EQ, ASYM, DISEQ, R1, R4, R5, ACUN, ACUNH, CUSTOM,
    theory_signature,
)
