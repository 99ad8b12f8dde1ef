import regex

from uniflab.util import TermSyntaxError, SignatureError, FRESH_PREFIX
from uniflab.modules.term.term import (
    Var, Const, ZERO, ZERO_NAME, PLUS, mk_app, Signature,
)

_TOKEN = regex.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<zero>0(?![0-9]))|(?P<punct>[(),+]))")

XOR_ALIAS = "xor"


def tokenize(text):
    """Yield ``(kind, value, position)`` triples and a final ``("end", "", len)``."""
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            yield "end", "", n
            return
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TermSyntaxError("unexpected character {!r}".format(text[pos]), pos)
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()


class _Parser(object):
    def __init__(self, text, signature):
        self.text = text
        self.signature = signature
        self.tokens = list(tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        kind, val, pos = self.tokens[self.i]
        if value is not None and val != value:
            raise TermSyntaxError("expected {!r}".format(value), pos)
        self.i += 1
        return kind, val, pos

    def expr(self):
        terms = [self.atom()]
        while self.peek()[1] == PLUS:
            self.take(PLUS)
            terms.append(self.atom())
        if len(terms) == 1:
            return terms[0]
        self._need(PLUS, 2, len(terms), self.peek()[2])
        # left-nested so non-AC signatures keep the written bracketing
        t = terms[0]
        for u in terms[1:]:
            t = mk_app(PLUS, (t, u), self.signature.ac)
        return t

    def _need(self, name, arity, got, pos):
        if name not in self.signature.functions:
            raise SignatureError("symbol '{}' is not in the signature (position {})".format(name, pos))
        expected = self.signature.functions[name].arity
        if name == PLUS and name in self.signature.ac:
            return
        if expected != arity:
            raise SignatureError("arity mismatch for '{}': expected {}, got {} (position {})".format(
                name, expected, got, pos))

    def atom(self):
        kind, val, pos = self.take()
        if kind == "zero":
            if ZERO_NAME not in self.signature.functions and not self.signature.is_constant(ZERO_NAME):
                raise SignatureError("'0' is not in the signature (position {})".format(pos))
            return ZERO
        if kind == "punct" and val == "(":
            t = self.expr()
            self.take(")")
            return t
        if kind != "ident":
            raise TermSyntaxError("unexpected {!r}".format(val or "end of input"), pos)
        if self.peek()[1] == "(":
            self.take("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take(",")
                args.append(self.expr())
            self.take(")")
            if val == XOR_ALIAS:
                self._need(PLUS, 2, len(args), pos)
                return mk_app(PLUS, args, self.signature.ac)
            self._need(val, len(args), len(args), pos)
            return mk_app(val, args, self.signature.ac)
        if val.startswith(FRESH_PREFIX):
            raise TermSyntaxError("names starting with '{}' are reserved".format(FRESH_PREFIX), pos)
        if self.signature.is_constant(val):
            return Const(val)
        if val in self.signature.functions:
            raise SignatureError("function symbol '{}' used without arguments (position {})".format(val, pos))
        if self.signature.allows_variable(val):
            return Var(val)
        raise SignatureError("unknown symbol '{}' (position {})".format(val, pos))


def parse_term(text: str, signature: Signature):
    """Parse ``text`` into a canonical term over ``signature``.

    Grammar::

        term := atom ('+' atom)*
        atom := '0' | ident | ident '(' term (',' term)* ')' | '(' term ')'

    ``xor(t1, ..., tn)`` is accepted as an n-ary spelling of ``+``.
    """
    p = _Parser(text, signature)
    if p.peek()[0] == "end":
        raise TermSyntaxError("empty term", 0)
    t = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise TermSyntaxError("trailing input {!r}".format(val), pos)
    return t
