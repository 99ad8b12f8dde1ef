"""Ground asymmetric unification modulo ACUNh with automata.

With one constant ``a`` a ground normal form is a finite set of powers
``h^i(a)``, i.e. a bit string read from ``i = 0`` upward. Each standard
equation is a regular relation on these strings, so a problem is solvable
iff the product of the equation automata accepts some word. Several
constants are handled by guessing which components of each variable are
zero and solving one single-constant problem per constant.
"""

import itertools as it
import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from uniflab.util import FreshNames, UnsupportedProblem, SizeCapExceeded
from uniflab.modules.term.term import Var, Const, App, ZERO, PLUS, plus, is_sum
from uniflab.modules.term.problem import Problem, ASYM, DISEQ
from uniflab.modules.rewrite.theories import ACUNH_THEORY
from uniflab.modules.rewrite.engine import normalize, verify_solution
from uniflab.modules.automata.dfa import (
    xor_automaton, asym_xor_automaton, hom_automaton, asym_hom_automaton,
    const_automaton, zero_automaton, nonzero_automaton, copy_automaton,
    intersect, is_empty, decode,
)
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

BACKEND = "acunh-automata"

SUM, HOM, CONST, ZERO_EQ, COPY = "sum", "hom", "const", "zero", "copy"


@dataclass(frozen=True)
class AEq:
    lhs: str
    kind: str
    args: Tuple[str, ...] = ()
    symbol: Optional[str] = None
    asym: bool = False

    def __str__(self):
        rel = "=v" if self.asym else "="
        if self.kind == SUM:
            rhs = "{} + {}".format(*self.args)
        elif self.kind == HOM:
            rhs = "h({})".format(self.args[0])
        elif self.kind == CONST:
            rhs = self.symbol
        elif self.kind == ZERO_EQ:
            rhs = "0"
        else:
            rhs = self.args[0]
        return "{} {} {}".format(self.lhs, rel, rhs)


def standardize_acunh(problem: Problem, fresh: Optional[FreshNames] = None):
    """Flatten into ``P = Q + R``, ``X = h(Y)``, ``X = c``, ``X = 0`` and ``X = Y``.

    Longer sums are split right-nested; every piece of an asymmetric
    right-hand side stays asymmetric. Returns the equations and the track
    order: declared variables first, then fresh ones.
    """
    if problem.has(DISEQ):
        raise UnsupportedProblem("disequations go to the Smith-form backend")
    problem.check_signature()
    fresh = fresh or FreshNames(taken=problem.variables)
    out: List[AEq] = []
    tracks = list(problem.variables)

    def new_var():
        v = fresh()
        tracks.append(v)
        return v

    def name(t, asym):
        if isinstance(t, Var):
            return t.name
        v = new_var()
        shape(v, t, asym)
        return v

    def shape(lhs, t, asym):
        slot = len(out)
        out.append(None)
        if isinstance(t, Var):
            eq = AEq(lhs, COPY, (t.name,), asym=asym)
        elif t == ZERO:
            eq = AEq(lhs, ZERO_EQ, asym=asym)
        elif isinstance(t, Const):
            eq = AEq(lhs, CONST, symbol=t.name, asym=asym)
        elif is_sum(t):
            head, rest = t.args[0], t.args[1:]
            q = name(head, asym)
            r = name(rest[0] if len(rest) == 1 else App(PLUS, rest), asym)
            eq = AEq(lhs, SUM, (q, r), asym=asym)
        elif t.symbol == "h":
            eq = AEq(lhs, HOM, (name(t.args[0], asym),), asym=asym)
        else:
            raise UnsupportedProblem("symbol '{}' is not in ACUNh".format(t.symbol))
        out[slot] = eq

    for item in problem.items:
        l, r = item.lhs, item.rhs
        if item.relation == ASYM:
            shape(name(l, False), r, True)
        elif isinstance(l, Var):
            if l != r:
                shape(l.name, r, False)
        elif isinstance(r, Var):
            shape(r.name, l, False)
        else:
            shape(name(l, False), r, False)
    return out, tuple(tracks)


def equation_automaton(eq: AEq, index: Dict[str, int], width: int):
    x = index[eq.lhs]
    if eq.kind == SUM:
        q, r = index[eq.args[0]], index[eq.args[1]]
        return (asym_xor_automaton if eq.asym else xor_automaton)(width, x, q, r)
    if eq.kind == HOM:
        y = index[eq.args[0]]
        return (asym_hom_automaton if eq.asym else hom_automaton)(width, x, y)
    if eq.kind == CONST:
        return const_automaton(width, x)
    if eq.kind == ZERO_EQ:
        return zero_automaton(width, x)
    return copy_automaton(width, x, index[eq.args[0]])


def solve_component(equations, tracks, constant, flags=None):
    """Single-constant case: intersect the equation automata.

    ``flags`` optionally pins each track to zero (``False``) or non-zero.
    Returns the decoded values or ``None`` when the product is empty.
    """
    index = {v: k for k, v in enumerate(tracks)}
    width = len(tracks)
    automata = [equation_automaton(eq, index, width) for eq in equations]
    for v, nonzero in (flags or {}).items():
        automata.append((nonzero_automaton if nonzero else zero_automaton)(width, index[v]))
    empty, witness = is_empty(intersect(automata, width))
    if empty:
        return None, None
    return decode(witness, tracks, constant), witness


def component_equations(equations, guess, constant, constants):
    """Rewrite the equations for one constant's component under a zero/non-zero guess."""
    k = constants.index(constant)
    out = []
    for eq in equations:
        if eq.kind == CONST:
            out.append(replace(eq, asym=False) if eq.symbol == constant else AEq(eq.lhs, ZERO_EQ))
        elif eq.kind == HOM and eq.asym:
            y = eq.args[0]
            if guess[y][k]:
                out.append(eq)
            else:
                out.extend([AEq(eq.lhs, ZERO_EQ), AEq(y, ZERO_EQ)])
        elif eq.kind == SUM and eq.asym:
            q, r = eq.args
            gq, gr = guess[q][k], guess[r][k]
            if gq and gr:
                out.append(eq)
            elif gq:
                out.append(AEq(eq.lhs, COPY, (q,)))
            elif gr:
                out.append(AEq(eq.lhs, COPY, (r,)))
            else:
                out.append(AEq(eq.lhs, ZERO_EQ))
        else:
            out.append(replace(eq, asym=False))
    return out


def _consistent(equations, guess, constants):
    for eq in equations:
        gx = guess[eq.lhs]
        if eq.kind == CONST:
            if gx != tuple(c == eq.symbol for c in constants):
                return False
        elif eq.kind == ZERO_EQ:
            if any(gx):
                return False
        elif eq.kind == COPY or (eq.kind == HOM and not eq.asym):
            if gx != guess[eq.args[0]]:
                return False
        elif eq.kind == HOM:
            gy = guess[eq.args[0]]
            if sum(gy) != 1 or gx != gy:
                return False
        elif eq.kind == SUM:
            gq, gr = guess[eq.args[0]], guess[eq.args[1]]
            if eq.asym:
                if not any(gq) or not any(gr):
                    return False
                if gx != tuple(a or b for a, b in zip(gq, gr)):
                    return False
            elif any((x and not (a or b)) or (a != b and not x) for x, a, b in zip(gx, gq, gr)):
                return False
    return True


def _choices(equations, tracks, constants):
    n = len(constants)
    every = list(it.product((False, True), repeat=n))
    singles = [tuple(i == k for i in range(n)) for k in range(n)]
    choices = {v: every for v in tracks}
    for eq in equations:
        if eq.kind == ZERO_EQ:
            choices[eq.lhs] = [(False,) * n]
        elif eq.kind == CONST:
            choices[eq.lhs] = [tuple(c == eq.symbol for c in constants)]
        elif eq.kind == HOM and eq.asym:
            choices[eq.args[0]] = [g for g in choices[eq.args[0]] if g in singles]
            choices[eq.lhs] = [g for g in choices[eq.lhs] if g in singles]
    return choices


def solve_guess(equations, tracks, constants, guess):
    """Solve every component under one guess; returns combined values or ``None``."""
    values = {v: [] for v in tracks}
    for k, c in enumerate(constants):
        comp = component_equations(equations, guess, c, constants)
        flags = {v: guess[v][k] for v in tracks}
        decoded, _ = solve_component(comp, tracks, c, flags)
        if decoded is None:
            return None
        for v in tracks:
            values[v].append(decoded[v])
    return {v: normalize(plus(*parts), ACUNH_THEORY) for v, parts in values.items()}


def ground_asym_unify_acunh(problem: Problem, max_guesses=1 << 16):
    """Decide ground asymmetric unifiability modulo ACUNh over the declared constants."""
    equations, tracks = standardize_acunh(problem)
    constants = list(problem.constants)
    keep = set(problem.variables)

    if not constants:
        sigma = {v: ZERO for v in problem.variables}
        if verify_solution(problem, sigma, ACUNH_THEORY):
            return Solvable(sigma, BACKEND)
        return Unsolvable("only 0 is ground and it does not verify", BACKEND)

    if len(constants) == 1:
        decoded, witness = solve_component(equations, tracks, constants[0])
        if decoded is None:
            return Unsolvable("product automaton is empty", BACKEND)
        sigma = {v: t for v, t in decoded.items() if v in keep}
        if not verify_solution(problem, sigma, ACUNH_THEORY):
            return Unsolvable("decoded witness failed verification", BACKEND, fail_rule="verification")
        return Solvable(sigma, BACKEND, stats={"witness": [list(s) for s in witness]})

    choices = _choices(equations, tracks, constants)
    total = 1
    for v in tracks:
        total *= len(choices[v])
    if total > max_guesses:
        raise SizeCapExceeded("zero/non-zero guess space", total, max_guesses)
    tried = 0
    for combo in it.product(*(choices[v] for v in tracks)):
        guess = dict(zip(tracks, combo))
        if not _consistent(equations, guess, constants):
            continue
        tried += 1
        values = solve_guess(equations, tracks, constants, guess)
        if values is None:
            continue
        sigma = {v: t for v, t in values.items() if v in keep}
        if verify_solution(problem, sigma, ACUNH_THEORY):
            logger.debug("guess %d of %d verified", tried, total)
            return Solvable(sigma, BACKEND, stats={"guesses": tried})
    return Unsolvable("no zero/non-zero guess yields non-empty components", BACKEND,
                      stats={"guesses": tried})
