"""Exhaustive oracles the crosscheck harness compares solvers against."""

import itertools as it
import logging

import numpy as np

from uniflab.util import SizeCapExceeded
from uniflab.modules.term.term import Const, App, ZERO, plus, h_power
from uniflab.modules.term.problem import R1, R4, R5, ACUN, ACUNH, theory_functions
from uniflab.modules.rewrite.theories import theory_of, make_theory
from uniflab.modules.rewrite.engine import is_normal_form
from uniflab.modules.oracles.instances import CnfFormula, Graph
from uniflab.modules.oracles.search import backtrack_search
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

SAT_CAP = 20
COLORING_CAP = 12


def _assignments(n):
    """All ``2^n`` truth assignments as a boolean matrix, row ``k`` is the bits of ``k``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def _literal_values(table, clause):
    cols = [table[:, abs(l) - 1] if l > 0 else ~table[:, abs(l) - 1] for l in clause]
    return np.stack(cols, axis=1)


def sat_assignment(f: CnfFormula):
    """First satisfying assignment as a ``{var: bool}`` dict, or ``None``."""
    if f.num_vars > SAT_CAP:
        raise SizeCapExceeded("formula", f.num_vars, SAT_CAP)
    table = _assignments(f.num_vars)
    ok = np.ones(len(table), dtype=bool)
    for clause in f.clauses:
        ok &= _literal_values(table, clause).any(axis=1)
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return {j + 1: bool(table[hits[0], j]) for j in range(f.num_vars)}


def brute_sat(f: CnfFormula) -> bool:
    return sat_assignment(f) is not None


def nae_assignment(f: CnfFormula):
    if f.num_vars > SAT_CAP:
        raise SizeCapExceeded("formula", f.num_vars, SAT_CAP)
    table = _assignments(f.num_vars)
    ok = np.ones(len(table), dtype=bool)
    for clause in f.clauses:
        vals = _literal_values(table, clause)
        ok &= vals.any(axis=1) & ~vals.all(axis=1)
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return {j + 1: bool(table[hits[0], j]) for j in range(f.num_vars)}


def brute_nae(f: CnfFormula) -> bool:
    return nae_assignment(f) is not None


def coloring(g: Graph, k=3):
    """First proper ``k``-coloring as ``{vertex: color}`` with colors ``1..k``."""
    n = g.num_vertices
    if n > COLORING_CAP:
        raise SizeCapExceeded("graph", n, COLORING_CAP)
    if n == 0:
        return {}
    idx = np.arange(k ** n, dtype=np.int64)
    digits = (idx[:, None] // (k ** np.arange(n, dtype=np.int64))) % k
    ok = np.ones(len(idx), dtype=bool)
    for u, v in g.edges:
        ok &= digits[:, u - 1] != digits[:, v - 1]
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return {v + 1: int(digits[hits[0], v]) + 1 for v in range(n)}


def brute_coloring(g: Graph, k=3) -> bool:
    return coloring(g, k) is not None


def ground_terms(theory_tag, depth, constants=None, symbol="h", theory=None, functions=()):
    """Ground normal forms of bounded depth.

    For the syntactic theories this enumerates terms level by level and
    keeps the irreducible ones. For ACUN(h) it returns every sum of distinct
    ``h^i(c)`` with ``i <= depth`` (``i = 0`` only for ACUN), ``0`` included.
    """
    theory = theory or make_theory(theory_tag)
    if theory_tag in (ACUN, ACUNH):
        consts = list(constants or ())
        top = depth if theory_tag == ACUNH else 0
        atoms = [h_power(i, Const(c), symbol) for c in consts for i in range(top + 1)]
        out = []
        for size in range(len(atoms) + 1):
            for combo in it.combinations(atoms, size):
                out.append(plus(*combo) if combo else ZERO)
        return out
    consts = list(constants) if constants is not None else None
    if consts is None:
        consts = ["a", "b", "c"] if theory_tag == R1 else ["a", "b"]
    functions = [s for s in theory_functions(theory_tag, functions) if s.arity > 0]
    level = [Const(c) for c in consts]
    seen = list(level)
    for _ in range(depth):
        new = []
        for s in functions:
            for args in it.product(seen, repeat=s.arity):
                t = App(s.name, tuple(args))
                if t not in new and is_normal_form(t, theory):
                    new.append(t)
        seen = list(dict.fromkeys(seen + new))
    return seen


def brute_ground_search(problem, depth, extra_constants=(), node_cap=1_000_000):
    """Bounded search over ground normal forms; a negative verdict only covers the bound."""
    theory = theory_of(problem)
    consts = list(problem.constants) + [c for c in extra_constants if c not in problem.constants]
    terms = ground_terms(problem.theory, depth, consts, theory=theory, functions=problem.functions)
    candidates = {v: terms for v in problem.variables}
    sigma, nodes = backtrack_search(problem, candidates, theory, node_cap=node_cap)
    backend = "ground-search-depth-{}".format(depth)
    if sigma is None:
        return Unsolvable("no ground unifier up to depth {}".format(depth), backend,
                          bounded=True, stats={"nodes": nodes})
    return Solvable(sigma, backend, bounded=True, stats={"nodes": nodes})
