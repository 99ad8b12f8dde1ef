import logging
from collections import Counter
from functools import lru_cache

from uniflab.util import UnsupportedProblem, exists
from uniflab.modules.term.term import (
    Var, Const, App, ZERO, PLUS, mk_app, apply_subst, instantiate, subterms, subterm_at, replace_at,
    is_sum,
)
from uniflab.modules.term.problem import EQ, ASYM, DISEQ
from uniflab.modules.rewrite.theories import theory_of

logger = logging.getLogger(__name__)


def match(pattern, term, binding=None):
    """Syntactic matching; returns the extended binding or ``None``."""
    binding = dict(binding or {})
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Const):
            if p != t:
                return None
        else:
            if not isinstance(t, App) or t.symbol != p.symbol or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
    return binding


def _root_step(t, theory):
    for rule in theory.rules:
        binding = match(rule.lhs, t)
        if binding is not None:
            return apply_subst(binding, rule.rhs, theory.ac)
    return None


@lru_cache(maxsize=1 << 16)
def _normalize_plain(t, theory):
    if isinstance(t, App):
        t = mk_app(t.symbol, [_normalize_plain(a, theory) for a in t.args], theory.ac)
    reduct = _root_step(t, theory)
    if reduct is None:
        return t
    return _normalize_plain(reduct, theory)


def _xor_sum(parts):
    flat = []
    for p in parts:
        flat.extend(p.args if is_sum(p) else (p,))
    counts = Counter(p for p in flat if p != ZERO)
    return mk_app(PLUS, [p for p, k in counts.items() if k % 2])


@lru_cache(maxsize=1 << 16)
def _normalize_xor(t, homomorphism):
    if not isinstance(t, App):
        return t
    args = [_normalize_xor(a, homomorphism) for a in t.args]
    if t.symbol == PLUS:
        return _xor_sum(args)
    if homomorphism and t.symbol == "h":
        inner = args[0]
        if inner == ZERO:
            return ZERO
        if is_sum(inner):
            return _xor_sum([App("h", (s,)) for s in inner.args])
        return App("h", (inner,))
    return App(t.symbol, tuple(args))


def normalize(t, theory):
    """Return the unique normal form of ``t``; sums are compared modulo AC."""
    if theory.is_xor:
        return _normalize_xor(t, theory.homomorphism)
    return _normalize_plain(t, theory)


def is_normal_form(t, theory):
    return normalize(t, theory) == t


def joinable(s, t, theory):
    return normalize(s, theory) == normalize(t, theory)


def verify_solution(problem, sigma, theory=None):
    """Check every item of ``problem`` under ``sigma``.

    Equations need joinable sides, asymmetric equations additionally an
    irreducible instantiated right-hand side, disequations distinct normal forms.
    """
    theory = theory or theory_of(problem)
    for item in problem.items:
        l = apply_subst(sigma, item.lhs, theory.ac)
        r = apply_subst(sigma, item.rhs, theory.ac)
        same = joinable(l, r, theory)
        if item.relation == EQ and not same:
            return False
        if item.relation == ASYM:
            if not (same and is_normal_form(instantiate(sigma, item.rhs, theory.ac), theory)):
                return False
        if item.relation == DISEQ and same:
            return False
    return True


def failing_items(problem, sigma, theory=None):
    theory = theory or theory_of(problem)
    bad = []
    for i, item in enumerate(problem.items):
        if not verify_solution(problem.with_items([item]), sigma, theory):
            bad.append(i)
    return bad


# single steps, used to replay normalization under a randomized strategy

def _xor_redex(t, homomorphism):
    if is_sum(t):
        return ZERO in t.args or len(set(t.args)) != len(t.args)
    if homomorphism and isinstance(t, App) and t.symbol == "h":
        return t.args[0] == ZERO or is_sum(t.args[0])
    return False


def redexes(t, theory):
    out = []
    for pos, s in subterms(t):
        if theory.is_xor:
            if _xor_redex(s, theory.homomorphism):
                out.append(pos)
        elif _root_step(s, theory) is not None:
            out.append(pos)
    return out


def _xor_step(s, rng):
    if is_sum(s):
        args = list(s.args)
        if ZERO in args and (not exists(rng) or rng.random() < 0.5 or len(set(args)) == len(args)):
            args.remove(ZERO)
            return mk_app(PLUS, args)
        dup = [u for u, k in Counter(args).items() if k > 1]
        u = rng.choice(dup) if exists(rng) else dup[0]
        args.remove(u)
        args.remove(u)
        return mk_app(PLUS, args)
    inner = s.args[0]
    if inner == ZERO:
        return ZERO
    head, rest = inner.args[0], mk_app(PLUS, inner.args[1:])
    return mk_app(PLUS, [App("h", (head,)), App("h", (rest,))])


def rewrite_step(t, pos, theory, rng=None):
    s = subterm_at(t, pos)
    if theory.is_xor:
        return replace_at(t, pos, _xor_step(s, rng), theory.ac)
    return replace_at(t, pos, _root_step(s, theory), theory.ac)


def normalize_randomized(t, theory, rng, max_steps=100000):
    """Rewrite at randomly chosen redexes until none is left."""
    for _ in range(max_steps):
        found = redexes(t, theory)
        if not found:
            return t
        t = rewrite_step(t, rng.choice(found), theory, rng)
    raise RuntimeError("no normal form after {} steps".format(max_steps))


def _symbol(t):
    return t.name if isinstance(t, Const) else t.symbol


def _args(t):
    return t.args if isinstance(t, App) else ()


def lpo_greater(s, t, precedence):
    """Lexicographic path order induced by ``precedence`` (greatest first)."""
    rank = {name: len(precedence) - i for i, name in enumerate(precedence)}
    return _lpo(s, t, rank)


def _lpo(s, t, rank):
    if isinstance(s, Var):
        return False
    if isinstance(t, Var):
        return any(u == t for _, u in subterms(s)) and s != t
    sargs, targs = _args(s), _args(t)
    if any(u == t or _lpo(u, t, rank) for u in sargs):
        return True
    f, g = _symbol(s), _symbol(t)
    if rank.get(f, 0) > rank.get(g, 0):
        return all(_lpo(s, v, rank) for v in targs)
    if f == g and len(sargs) == len(targs):
        if not all(_lpo(s, v, rank) for v in targs):
            return False
        for u, v in zip(sargs, targs):
            if u != v:
                return _lpo(u, v, rank)
    return False


def check_orientation(theory):
    """True when every rule decreases in the lexicographic path order."""
    if theory.is_xor:
        raise UnsupportedProblem("path orders do not cover AC theories")
    if not theory.precedence:
        raise UnsupportedProblem("theory '{}' has no symbol precedence".format(theory.tag))
    ok = all(lpo_greater(r.lhs, r.rhs, theory.precedence) for r in theory.rules)
    logger.debug("orientation of %s: %s", theory.tag, ok)
    return ok
