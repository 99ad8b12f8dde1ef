from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from uniflab.util import natural_key, exists, SignatureError, FRESH_PREFIX

PLUS = "+"
ZERO_NAME = "0"
AC_SYMBOLS = frozenset([PLUS])

KIND_FREE = "free-function"
KIND_AC = "ac-binary"
KIND_UNIT = "unit"
KIND_HOM = "homomorphism"


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: str = KIND_FREE


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: Tuple["Term", ...]

    def __str__(self):
        return print_term(self)


Term = Union[Var, Const, App]
Substitution = Mapping[str, Term]

ZERO = Const(ZERO_NAME)


class Signature(object):
    """Function symbols, constants and (optionally) variables a problem may use.

    ``variables`` set to ``None`` leaves the signature open: any bare
    identifier that is not a declared constant parses as a variable.
    """

    def __init__(self, functions=(), constants=(), variables=None, ac=AC_SYMBOLS):
        self.functions: Dict[str, Symbol] = {s.name: s for s in functions}
        self.constants = tuple(constants)
        self.variables = tuple(variables) if exists(variables) else None
        self.ac = frozenset(ac)
        self._const_index = {c: i for i, c in enumerate(self.constants)}
        self._var_index = {v: i for i, v in enumerate(self.variables or ())}

    def is_constant(self, name):
        return name in self._const_index

    def allows_variable(self, name):
        if name.startswith(FRESH_PREFIX):
            return False
        if self.variables is None:
            return not self.is_constant(name)
        return name in self._var_index

    def arity(self, name):
        if name not in self.functions:
            raise SignatureError("unknown function symbol '{}'".format(name))
        return self.functions[name].arity

    def with_names(self, constants=None, variables=None):
        return Signature(self.functions.values(), constants if exists(constants) else self.constants,
                         variables if exists(variables) else self.variables, self.ac)

    def declared_key(self, t):
        """Order key following the declared variable/constant sequence."""
        if isinstance(t, Var):
            return (0, self._var_index.get(t.name, len(self._var_index)), natural_key(t.name))
        if isinstance(t, Const):
            return (1, self._const_index.get(t.name, len(self._const_index)), natural_key(t.name))
        return (2, t.symbol, tuple(self.declared_key(a) for a in t.args))

    def __repr__(self):
        return "Signature(functions={}, constants={}, variables={})".format(
            sorted(self.functions), list(self.constants), self.variables)


def sort_key(t: Term):
    """Fixed total order used for canonical sums.

    Ascending keys put variables first, then constants, then applications;
    names compare naturally so ``x1`` precedes ``x2``.
    """
    if isinstance(t, Var):
        return (0, natural_key(t.name))
    if isinstance(t, Const):
        return (1, natural_key(t.name))
    return (2, t.symbol, tuple(sort_key(a) for a in t.args))


def term_order(s: Term, t: Term, signature: Optional[Signature] = None) -> int:
    """Return 1 when ``s`` is greater (sorts first), -1 when smaller, 0 when equal."""
    key = signature.declared_key if exists(signature) else sort_key
    ks, kt = key(s), key(t)
    if ks == kt:
        return 0
    return 1 if ks < kt else -1


def is_sum(t):
    return isinstance(t, App) and t.symbol == PLUS


def summands(t):
    return t.args if is_sum(t) else (t,)


def _flatten(symbol, args):
    out = []
    for a in args:
        if isinstance(a, App) and a.symbol == symbol:
            out.extend(a.args)
        else:
            out.append(a)
    return out


def mk_app(symbol: str, args: Sequence[Term], ac=AC_SYMBOLS, keep_zero=False) -> Term:
    """Build an application, flattening and sorting AC sums.

    Duplicated summands are kept: only normalization cancels them. Zero
    summands are dropped unless ``keep_zero`` is set.
    """
    args = tuple(args)
    if symbol in ac:
        flat = _flatten(symbol, args)
        if not keep_zero:
            flat = [a for a in flat if a != ZERO]
        flat.sort(key=sort_key)
        if not flat:
            return ZERO
        if len(flat) == 1:
            return flat[0]
        return App(symbol, tuple(flat))
    return App(symbol, args)


def plus(*terms: Term, ac=AC_SYMBOLS) -> Term:
    return mk_app(PLUS, terms, ac)


def h_power(k: int, t: Term, symbol="h") -> Term:
    for _ in range(k):
        t = App(symbol, (t,))
    return t


def canonical(t: Term, ac=AC_SYMBOLS) -> Term:
    if isinstance(t, App):
        return mk_app(t.symbol, [canonical(a, ac) for a in t.args], ac)
    return t


def apply_subst(sigma: Substitution, t: Term, ac=AC_SYMBOLS, keep_zero=False) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Const):
        return t
    return mk_app(t.symbol, [apply_subst(sigma, a, ac, keep_zero) for a in t.args], ac, keep_zero)


def instantiate(sigma: Substitution, t: Term, ac=AC_SYMBOLS) -> Term:
    """Apply ``sigma`` without dropping the zero summands it introduces."""
    return apply_subst(sigma, t, ac, keep_zero=True)


def compose(sigma: Substitution, tau: Substitution, ac=AC_SYMBOLS) -> Dict[str, Term]:
    """``compose(sigma, tau)`` applies ``sigma`` first, then ``tau``."""
    out = {}
    for x, t in sigma.items():
        u = apply_subst(tau, t, ac)
        if u != Var(x):
            out[x] = u
    for y, t in tau.items():
        if y not in sigma and t != Var(y):
            out[y] = t
    return out


Position = Tuple[int, ...]


def subterms(t: Term, pos: Position = ()) -> Iterator[Tuple[Position, Term]]:
    yield pos, t
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            yield from subterms(a, pos + (i,))


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Position, new: Term, ac=AC_SYMBOLS) -> Term:
    if not pos:
        return new
    args = list(t.args)
    args[pos[0]] = replace_at(args[pos[0]], pos[1:], new, ac)
    return mk_app(t.symbol, args, ac)


def variables(t: Term) -> Tuple[str, ...]:
    """Variable names of ``t`` in first-occurrence order."""
    seen = {}
    for _, s in subterms(t):
        if isinstance(s, Var):
            seen.setdefault(s.name, None)
    return tuple(seen)


def constants(t: Term) -> Tuple[str, ...]:
    seen = {}
    for _, s in subterms(t):
        if isinstance(s, Const) and s != ZERO:
            seen.setdefault(s.name, None)
    return tuple(seen)


def term_size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def is_ground(t: Term) -> bool:
    return not variables(t)


def print_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if t.symbol == PLUS:
        return " + ".join(_print_summand(a) for a in t.args)
    return "{}({})".format(t.symbol, ", ".join(print_term(a) for a in t.args))


def _print_summand(t):
    # a nested sum only survives in non-AC terms
    if is_sum(t):
        return "({})".format(print_term(t))
    return print_term(t)


def format_substitution(sigma: Substitution) -> str:
    body = ", ".join("{} -> {}".format(x, print_term(sigma[x]))
                     for x in sorted(sigma, key=natural_key))
    return "{" + body + "}"
