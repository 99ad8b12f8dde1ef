from dataclasses import dataclass, replace
from typing import Tuple

from uniflab.util import SignatureError, UnsupportedProblem, natural_key
from uniflab.modules.term.term import (
    Symbol, Signature, Term, PLUS, ZERO_NAME, AC_SYMBOLS,
    KIND_AC, KIND_UNIT, KIND_HOM, variables, constants,
)

EQ = "eq"
ASYM = "asym"
DISEQ = "diseq"
RELATIONS = (EQ, ASYM, DISEQ)
RELATION_TOKENS = {EQ: "=", ASYM: "=v", DISEQ: "!="}

R1, R4, R5, ACUN, ACUNH, CUSTOM = "r1", "r4", "r5", "acun", "acunh", "custom"
THEORIES = (R1, R4, R5, ACUN, ACUNH, CUSTOM)

DEFAULT_CONSTANTS = {
    R1: ("a", "b", "c"),
    R4: ("a", "b"),
    R5: ("a", "b"),
    ACUN: (),
    ACUNH: (),
    CUSTOM: (),
}


def theory_functions(theory, extra=()):
    if theory == R1:
        return (Symbol("h", 1), Symbol("f", 2))
    if theory in (R4, R5):
        return (Symbol("g", 1), Symbol("f", 3))
    if theory == ACUN:
        return (Symbol(PLUS, 2, KIND_AC), Symbol(ZERO_NAME, 0, KIND_UNIT))
    if theory == ACUNH:
        return (Symbol(PLUS, 2, KIND_AC), Symbol(ZERO_NAME, 0, KIND_UNIT), Symbol("h", 1, KIND_HOM))
    if theory == CUSTOM:
        return (Symbol(PLUS, 2),) + tuple(s for s in extra if s.name != PLUS)
    raise UnsupportedProblem("unknown theory '{}'".format(theory))


def theory_signature(theory, constants=None, variables=None, functions=()):
    consts = tuple(constants) if constants is not None else DEFAULT_CONSTANTS[theory]
    ac = AC_SYMBOLS if theory in (ACUN, ACUNH) else frozenset()
    return Signature(theory_functions(theory, functions), consts, variables, ac)


@dataclass(frozen=True)
class Item:
    lhs: Term
    rhs: Term
    relation: str = EQ

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError("unknown relation '{}'".format(self.relation))


@dataclass(frozen=True)
class Problem:
    """A conjunction of equations, asymmetric equations and disequations."""

    theory: str
    items: Tuple[Item, ...]
    constants: Tuple[str, ...] = ()
    variables: Tuple[str, ...] = ()
    rules: Tuple[Tuple[Term, Term], ...] = ()
    functions: Tuple[Symbol, ...] = ()

    @classmethod
    def build(cls, theory, items, constants=None, variables=None, rules=(), functions=()):
        items = tuple(items)
        if constants is None:
            seen = {}
            for it in items:
                for c in constants_of(it):
                    seen.setdefault(c, None)
            constants = DEFAULT_CONSTANTS.get(theory, ()) + tuple(
                c for c in sorted(seen, key=natural_key) if c not in DEFAULT_CONSTANTS.get(theory, ()))
        if variables is None:
            seen = {}
            for it in items:
                for x in variables_of(it):
                    seen.setdefault(x, None)
            variables = tuple(seen)
        return cls(theory, items, tuple(constants), tuple(variables), tuple(rules), tuple(functions))

    @property
    def signature(self):
        return theory_signature(self.theory, self.constants, self.variables, self.functions)

    @property
    def relations(self):
        return frozenset(it.relation for it in self.items)

    def has(self, relation):
        return any(it.relation == relation for it in self.items)

    def with_items(self, items):
        return replace(self, items=tuple(items))

    def check_signature(self, allowed_constants=None):
        sig = self.signature
        for it in self.items:
            for t in (it.lhs, it.rhs):
                for c in constants(t):
                    if not sig.is_constant(c) or (allowed_constants is not None and c not in allowed_constants):
                        raise SignatureError("constant '{}' is outside the {} signature".format(c, self.theory))


def variables_of(item: Item):
    seen = dict.fromkeys(variables(item.lhs))
    seen.update(dict.fromkeys(variables(item.rhs)))
    return tuple(seen)


def constants_of(item: Item):
    seen = dict.fromkeys(constants(item.lhs))
    seen.update(dict.fromkeys(constants(item.rhs)))
    return tuple(seen)
