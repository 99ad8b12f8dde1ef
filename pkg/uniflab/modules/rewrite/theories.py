from dataclasses import dataclass
from typing import Tuple

from uniflab.util import UnsupportedProblem, SignatureError
from uniflab.modules.term.term import Var, Const, App, ZERO, AC_SYMBOLS, Term, variables
from uniflab.modules.term.problem import R1, R4, R5, ACUN, ACUNH, CUSTOM


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise SignatureError("rule left-hand side must not be a variable")
        extra = set(variables(self.rhs)) - set(variables(self.lhs))
        if extra:
            raise SignatureError("rule introduces variables {}".format(sorted(extra)))


@dataclass(frozen=True)
class TheorySpec:
    """A convergent rewrite system together with how to normalize under it.

    ``ac`` names the symbols whose arguments are kept flattened and sorted;
    ``homomorphism`` is set when ``h`` distributes over ``+``.
    """

    tag: str
    rules: Tuple[RewriteRule, ...]
    ac: frozenset = frozenset()
    homomorphism: bool = False
    precedence: Tuple[str, ...] = ()

    @property
    def is_xor(self):
        return bool(self.ac)


def _f(*args):
    return App("f", tuple(args))


a, b, c = Const("a"), Const("b"), Const("c")
x, y = Var("x"), Var("y")

R1_THEORY = TheorySpec(
    R1,
    (RewriteRule(App("h", (a,)), _f(a, c)),
     RewriteRule(App("h", (b,)), _f(b, c))),
    precedence=("h", "f", "a", "b", "c"))

R4_THEORY = TheorySpec(
    R4,
    (RewriteRule(_f(a, a, a), App("g", (a,))),
     RewriteRule(_f(b, b, b), App("g", (b,)))),
    precedence=("f", "g", "a", "b"))

R5_THEORY = TheorySpec(
    R5,
    (RewriteRule(App("g", (a,)), _f(a, a, a)),
     RewriteRule(App("g", (b,)), _f(b, b, b))),
    precedence=("g", "f", "a", "b"))

_ACUN_RULES = (
    RewriteRule(App("+", (x, x)), ZERO),
    RewriteRule(App("+", (x, ZERO)), x),
    RewriteRule(App("+", (x, App("+", (y, x)))), y),
)

ACUN_THEORY = TheorySpec(ACUN, _ACUN_RULES, ac=AC_SYMBOLS)

ACUNH_THEORY = TheorySpec(
    ACUNH,
    _ACUN_RULES + (
        RewriteRule(App("h", (App("+", (x, y)),)), App("+", (App("h", (x,)), App("h", (y,))))),
        RewriteRule(App("h", (ZERO,)), ZERO)),
    ac=AC_SYMBOLS,
    homomorphism=True)

BUILTIN_THEORIES = {t.tag: t for t in (R1_THEORY, R4_THEORY, R5_THEORY, ACUN_THEORY, ACUNH_THEORY)}


def make_theory(tag, rules=(), precedence=()):
    """Look up a built-in theory, or assemble a custom one from ``(lhs, rhs)`` pairs.

    Custom theories rewrite without AC: ``+`` is an ordinary binary symbol.
    """
    if tag in BUILTIN_THEORIES:
        return BUILTIN_THEORIES[tag]
    if tag != CUSTOM:
        raise UnsupportedProblem("unknown theory '{}'".format(tag))
    if not rules:
        raise UnsupportedProblem("a custom theory needs at least one rule")
    built = tuple(r if isinstance(r, RewriteRule) else RewriteRule(*r) for r in rules)
    return TheorySpec(CUSTOM, built, precedence=tuple(precedence))


def theory_of(problem):
    return make_theory(problem.theory, problem.rules)
