"""Instance generators behind the hardness results, and the deciders for their targets.

* 3SAT to disunification modulo R1 (true is ``a``, false is ``b``).
* graph 3-coloring to ground asymmetric unification modulo ACUN.
* monotone not-all-equal 3SAT to asymmetric unification modulo R4.
"""

import logging

from uniflab.util import UnsupportedProblem, InstanceFormatError
from uniflab.modules.term.term import Var, Const, App, plus, variables
from uniflab.modules.term.problem import Problem, Item, EQ, ASYM, DISEQ, R1, R4, ACUN
from uniflab.modules.rewrite.theories import R1_THEORY, R4_THEORY
from uniflab.modules.oracles.instances import CnfFormula, Graph
from uniflab.modules.oracles.brute import ground_terms
from uniflab.modules.oracles.search import backtrack_search
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

TRUE, FALSE = Const("a"), Const("b")
COLORS = (Const("c1"), Const("c2"), Const("c3"))


def _f(*args):
    return App("f", tuple(args))


def _x(j):
    return Var("x{}".format(j))


def _three(clause):
    clause = tuple(clause)
    if not 1 <= len(clause) <= 3:
        raise InstanceFormatError("clause {} does not have 1 to 3 literals".format(clause))
    # a repeated literal leaves the clause unchanged
    return clause + (clause[-1],) * (3 - len(clause))


def sat3_to_r1_disunif(formula: CnfFormula) -> Problem:
    """Each variable gets ``h(x) = f(x, c)``, forcing it to ``a`` or ``b``.

    Each clause forbids its single falsifying assignment through one
    disequation between nested ``f`` terms.
    """
    items = []
    for j in range(1, formula.num_vars + 1):
        items.append(Item(App("h", (_x(j),)), _f(_x(j), Const("c")), EQ))
    for clause in formula.clauses:
        p, q, r = _three(clause)
        lhs = _f(_x(abs(p)), _f(_x(abs(q)), _x(abs(r))))
        falsify = [FALSE if lit > 0 else TRUE for lit in (p, q, r)]
        items.append(Item(lhs, _f(falsify[0], _f(falsify[1], falsify[2])), DISEQ))
    names = tuple("x{}".format(j) for j in range(1, formula.num_vars + 1))
    return Problem.build(R1, items, ("a", "b", "c"), names)


def coloring_to_acun_asym(graph: Graph) -> Problem:
    """Edge ``{v_i, v_j}`` number ``k`` becomes ``c1 + c2 + c3 =v y_i + y_j + z_k``.

    Irreducibility forces the three summands to be distinct single colors.
    """
    target = plus(*COLORS)
    items = []
    for k, (i, j) in enumerate(graph.edges, start=1):
        rhs = plus(Var("y{}".format(i)), Var("y{}".format(j)), Var("z{}".format(k)))
        items.append(Item(target, rhs, ASYM))
    names = tuple("y{}".format(i) for i in range(1, graph.num_vertices + 1))
    names += tuple("z{}".format(k) for k in range(1, len(graph.edges) + 1))
    return Problem.build(ACUN, items, tuple(c.name for c in COLORS), names)


def nae3sat_to_r4_asym(formula: CnfFormula) -> Problem:
    """``f(x, x, x) = g(x)`` pins each variable to ``a`` or ``b``;
    ``z_j =v f(x_p, x_q, x_r)`` forbids the two constant triples.
    """
    if not formula.is_monotone:
        raise UnsupportedProblem("the R4 reduction takes monotone clauses only")
    items = []
    for j in range(1, formula.num_vars + 1):
        items.append(Item(_f(_x(j), _x(j), _x(j)), App("g", (_x(j),)), EQ))
    for k, clause in enumerate(formula.clauses, start=1):
        p, q, r = _three(clause)
        items.append(Item(Var("z{}".format(k)), _f(_x(p), _x(q), _x(r)), ASYM))
    names = tuple("x{}".format(j) for j in range(1, formula.num_vars + 1))
    names += tuple("z{}".format(k) for k in range(1, len(formula.clauses) + 1))
    return Problem.build(R4, items, ("a", "b"), names)


def _derived_lhs(problem):
    """Variables defined only by ``z =v t``; their value follows from ``t``."""
    counts = {}
    for item in problem.items:
        for t in (item.lhs, item.rhs):
            for v in variables(t):
                counts[v] = counts.get(v, 0) + 1
    derived = {}
    for item in problem.items:
        if item.relation == ASYM and isinstance(item.lhs, Var) and counts[item.lhs.name] == 1:
            derived[item.lhs.name] = item.rhs
    return derived


def _pinned(problem, pattern):
    pinned = set()
    for item in problem.items:
        if item.relation == EQ:
            v = pattern(item)
            if v is not None:
                pinned.add(v)
    return pinned


def _r4_pin(item):
    l, r = item.lhs, item.rhs
    if isinstance(r, App) and r.symbol == "g" and isinstance(r.args[0], Var):
        x = r.args[0]
        if l == _f(x, x, x):
            return x.name
    return None


def _r1_pin(item):
    l, r = item.lhs, item.rhs
    if isinstance(l, App) and l.symbol == "h" and isinstance(l.args[0], Var):
        x = l.args[0]
        if r == _f(x, Const("c")):
            return x.name
    return None


def decide_asym_r4(problem: Problem, depth=1, node_cap=2_000_000):
    """Bounded search for asymmetric unifiers modulo R4.

    Exact when every searched variable is pinned by ``f(x,x,x) = g(x)``,
    which holds for instances of the not-all-equal reduction.
    """
    if problem.theory != R4:
        raise UnsupportedProblem("expected an r4 problem, got {}".format(problem.theory))
    if problem.has(DISEQ):
        raise UnsupportedProblem("disequations are not handled modulo R4")
    derived = _derived_lhs(problem)
    searched = [v for v in problem.variables if v not in derived]
    terms = ground_terms(R4, depth, problem.constants)
    sigma, nodes = backtrack_search(problem, {v: terms for v in searched}, R4_THEORY,
                                    derived=derived, node_cap=node_cap)
    exact = set(searched) <= _pinned(problem, _r4_pin)
    backend = "r4-search"
    if sigma is None:
        return Unsolvable("no asymmetric unifier over ground terms of depth {}".format(depth), backend,
                          bounded=not exact, stats={"nodes": nodes})
    return Solvable(sigma, backend, bounded=not exact, stats={"nodes": nodes})


def decide_disunif_r1(problem: Problem, depth=1, node_cap=2_000_000):
    """Bounded search for disunifiers modulo R1, exact on 3SAT reduction instances."""
    if problem.theory != R1:
        raise UnsupportedProblem("expected an r1 problem, got {}".format(problem.theory))
    if problem.has(ASYM):
        raise UnsupportedProblem("mixing disequations with asymmetric equations is not supported")
    terms = ground_terms(R1, depth, problem.constants)
    sigma, nodes = backtrack_search(problem, {v: terms for v in problem.variables}, R1_THEORY,
                                    node_cap=node_cap)
    exact = set(problem.variables) <= _pinned(problem, _r1_pin)
    backend = "r1-search"
    if sigma is None:
        return Unsolvable("no disunifier over ground terms of depth {}".format(depth), backend,
                          bounded=not exact, stats={"nodes": nodes})
    return Solvable(sigma, backend, bounded=not exact, stats={"nodes": nodes})


def decode_sat(sigma, num_vars):
    return {j: sigma.get("x{}".format(j)) == TRUE for j in range(1, num_vars + 1)}


def decode_coloring(sigma, graph: Graph):
    """Color ``k`` for ``c_k``; isolated vertices without a constant get color 1."""
    out = {}
    for i in range(1, graph.num_vertices + 1):
        t = sigma.get("y{}".format(i))
        out[i] = COLORS.index(t) + 1 if t in COLORS else 1
    return out
