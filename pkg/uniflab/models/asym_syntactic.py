"""Asymmetric unification modulo the theories R1 and R5.

The procedure flattens the problem into standard equations, trades each
asymmetric ``X =v h(Y)`` for a symmetric one plus the side conditions
``Y != a`` and ``Y != b``, runs the inference rules to a DAG-solved form and
finally settles the collected clauses by unit resolution.
"""

import itertools as it
import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import networkx as nx

from uniflab.util import FreshNames, UnsupportedProblem, SignatureError
from uniflab.modules.term.term import Var, Const, App, Term, variables as term_variables
from uniflab.modules.term.problem import Problem, Item, EQ, ASYM, DISEQ, R1, R5
from uniflab.modules.rewrite.theories import theory_of
from uniflab.modules.rewrite.engine import normalize, verify_solution
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

BACKEND = "asym-syntactic"

KIND_VAR = "var"
KIND_CONST = "const"
KIND_FUN = "fun"


@dataclass(frozen=True)
class StdEq:
    lhs: str
    kind: str
    symbol: Optional[str] = None
    args: Tuple[str, ...] = ()
    asym: bool = False

    def rhs_term(self) -> Term:
        if self.kind == KIND_VAR:
            return Var(self.args[0])
        if self.kind == KIND_CONST:
            return Const(self.symbol)
        return App(self.symbol, tuple(Var(a) for a in self.args))

    def occurrences(self):
        return (self.lhs,) + self.args

    def rename(self, old, new):
        lhs = new if self.lhs == old else self.lhs
        args = tuple(new if a == old else a for a in self.args)
        return replace(self, lhs=lhs, args=args)

    def __str__(self):
        rel = "=v" if self.asym else "="
        rhs = self.args[0] if self.kind == KIND_VAR else str(self.rhs_term())
        return "{} {} {}".format(self.lhs, rel, rhs)


@dataclass(frozen=True)
class NegUnit:
    var: str
    const: str

    def rename(self, old, new):
        return NegUnit(new, self.const) if self.var == old else self

    def __str__(self):
        return "~({} = {})".format(self.var, self.const)


@dataclass(frozen=True)
class PosPair:
    var: str
    choices: Tuple[str, str] = ("a", "b")

    def rename(self, old, new):
        return PosPair(new, self.choices) if self.var == old else self

    def __str__(self):
        return " | ".join("({} = {})".format(self.var, c) for c in self.choices)


@dataclass(frozen=True)
class RuleShape:
    """What the two rules ``u(d) -> f(...)`` of a theory look like.

    ``pattern`` has ``None`` where the right-hand side repeats ``d`` and a
    constant name where it is fixed.
    """

    unary: str
    wide: str
    arity: int
    redex_constants: Tuple[str, ...]
    pattern: Tuple[Optional[str], ...]


def rule_shape(theory) -> RuleShape:
    if theory.tag not in (R1, R5):
        raise UnsupportedProblem("asymmetric syntactic procedure covers r1 and r5, not {}".format(theory.tag))
    unary = wide = None
    consts, pattern = [], None
    for rule in theory.rules:
        d = rule.lhs.args[0].name
        unary, wide = rule.lhs.symbol, rule.rhs.symbol
        consts.append(d)
        shape = tuple(None if s == Const(d) else s.name for s in rule.rhs.args)
        if pattern is not None and shape != pattern:
            raise UnsupportedProblem("rules of {} do not share one shape".format(theory.tag))
        pattern = shape
    return RuleShape(unary, wide, len(pattern), tuple(consts), pattern)


@dataclass
class UnifState:
    equations: List[StdEq]
    gamma: List[object]
    trace: List[str]


@dataclass(frozen=True)
class Fail:
    rule: str
    detail: str


def standardize(problem: Problem, fresh: Optional[FreshNames] = None) -> List[StdEq]:
    """Flatten every item into equations whose sides have depth at most one.

    All subterms of an asymmetric right-hand side stay asymmetric: an
    instance is irreducible only if each of its subterms is.
    """
    if problem.has(DISEQ):
        raise UnsupportedProblem("disequations are not handled by the asymmetric procedure")
    if problem.theory == R1:
        problem.check_signature(allowed_constants=("a", "b", "c"))
    else:
        problem.check_signature()
    fresh = fresh or FreshNames(taken=problem.variables)
    out: List[StdEq] = []

    def name(t, asym):
        if isinstance(t, Var):
            return t.name
        v = fresh()
        shape(v, t, asym)
        return v

    def shape(lhs, t, asym):
        if isinstance(t, Var):
            eq = StdEq(lhs, KIND_VAR, None, (t.name,), asym)
        elif isinstance(t, Const):
            eq = StdEq(lhs, KIND_CONST, t.name, (), asym)
        else:
            slot = len(out)
            out.append(None)
            args = tuple(name(a, asym) for a in t.args)
            out[slot] = StdEq(lhs, KIND_FUN, t.symbol, args, asym)
            return
        out.append(eq)

    for item in problem.items:
        l, r = item.lhs, item.rhs
        if item.relation == ASYM:
            shape(name(l, False), r, True)
        elif isinstance(l, Var):
            if r != l:
                shape(l.name, r, False)
        elif isinstance(r, Var):
            shape(r.name, l, False)
        else:
            shape(name(l, False), r, False)
    return out


def remove_asymmetry(equations: List[StdEq], shape: RuleShape):
    """Drop the asymmetric flags, returning the equations and the clause set.

    ``X =v u(Y)`` needs ``Y`` to avoid every redex constant. Other shapes
    are irreducible once their arguments are, so they only lose the flag.
    """
    eqs, gamma = [], []
    for eq in equations:
        if eq.asym and eq.kind == KIND_FUN and eq.symbol == shape.unary:
            for d in shape.redex_constants:
                unit = NegUnit(eq.args[0], d)
                if unit not in gamma:
                    gamma.append(unit)
        eqs.append(replace(eq, asym=False))
    return eqs, gamma


def _occurs_elsewhere(var, index, state):
    for k, eq in enumerate(state.equations):
        if k != index and var in eq.occurrences():
            return True
    return any(c.var == var for c in state.gamma)


def _by_lhs(equations):
    groups = defaultdict(list)
    for k, eq in enumerate(equations):
        groups[eq.lhs].append(k)
    return groups


def _check_failures(state, shape) -> Optional[Fail]:
    for x, idx in _by_lhs(state.equations).items():
        eqs = [state.equations[k] for k in idx]
        consts = [e for e in eqs if e.kind == KIND_CONST]
        if not consts:
            continue
        for e in eqs:
            if e.kind == KIND_FUN:
                rule = "F2" if e.symbol == shape.unary else "F1"
                return Fail(rule, "{} and {}".format(consts[0], e))
        names = sorted({e.symbol for e in consts})
        if len(names) > 1:
            rule = "F4" if set(names[:2]) == set(shape.redex_constants) else "F3"
            return Fail(rule, "{} is equated to both {} and {}".format(x, names[0], names[1]))
    graph = nx.DiGraph()
    for eq in state.equations:
        if eq.kind == KIND_FUN:
            for a in eq.args:
                graph.add_edge(eq.lhs, a)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        return Fail("F5", "cycle through " + " -> ".join(u for u, _ in cycle))
    return None


def _replace_all(state, index, old, new):
    eqs = [eq if k == index else eq.rename(old, new) for k, eq in enumerate(state.equations)]
    gamma = []
    for c in state.gamma:
        c = c.rename(old, new)
        if c not in gamma:
            gamma.append(c)
    return eqs, gamma


def infer_step(state: UnifState, shape: RuleShape):
    """Apply the highest-priority applicable rule.

    Returns ``None`` when nothing applies, a ``Fail`` for a failure rule,
    otherwise the rule name and the successor state.
    """
    fail = _check_failures(state, shape)
    if fail is not None:
        return fail

    seen = set()
    for k, eq in enumerate(state.equations):
        if eq.kind == KIND_VAR and eq.args[0] == eq.lhs or eq in seen:
            eqs = state.equations[:k] + state.equations[k + 1:]
            return "delete", UnifState(eqs, list(state.gamma), state.trace + ["delete: {}".format(eq)])
        seen.add(eq)

    for k, eq in enumerate(state.equations):
        if eq.kind == KIND_VAR and _occurs_elsewhere(eq.lhs, k, state):
            eqs, gamma = _replace_all(state, k, eq.lhs, eq.args[0])
            return "a", UnifState(eqs, gamma, state.trace + ["a: eliminate {}".format(eq)])

    groups = _by_lhs(state.equations)
    for rule in ("b", "c", "d"):
        for x, idx in groups.items():
            for i, j in it.combinations(idx, 2):
                step = _pair_rule(rule, state, i, j, shape)
                if step is not None:
                    return rule, step
    return None


def _pair_rule(rule, state, i, j, shape):
    s, t = state.equations[i], state.equations[j]
    if s.kind != KIND_FUN or t.kind != KIND_FUN:
        return None
    rest = [e for k, e in enumerate(state.equations) if k not in (i, j)]
    if rule == "b" and s.symbol == t.symbol == shape.unary:
        new = [s] + _var_eqs(t.args, s.args)
        note = "b: {} and {}".format(s, t)
        return UnifState(_insert(state.equations, i, j, new), list(state.gamma), state.trace + [note])
    if rule == "c" and s.symbol == t.symbol == shape.wide:
        new = [s] + _var_eqs(t.args, s.args)
        note = "c: {} and {}".format(s, t)
        return UnifState(_insert(state.equations, i, j, new), list(state.gamma), state.trace + [note])
    if rule == "d" and {s.symbol, t.symbol} == {shape.unary, shape.wide}:
        u, w = (s, t) if s.symbol == shape.unary else (t, s)
        y = u.args[0]
        new, args = [], []
        for ui, pat in zip(w.args, shape.pattern):
            if pat is None:
                new.append(StdEq(ui, KIND_VAR, None, (y,)))
                args.append(y)
            else:
                new.append(StdEq(ui, KIND_CONST, pat))
                args.append(ui)
        new.append(StdEq(u.lhs, KIND_FUN, shape.wide, tuple(args)))
        new = [e for e in new if not (e.kind == KIND_VAR and e.lhs == e.args[0])]
        gamma = list(state.gamma)
        pair = PosPair(y, shape.redex_constants)
        if pair not in gamma:
            gamma.append(pair)
        note = "d: {} and {}".format(u, w)
        return UnifState(_insert(state.equations, i, j, new), gamma, state.trace + [note])
    return None


def _var_eqs(lhs_args, rhs_args):
    return [StdEq(x, KIND_VAR, None, (y,)) for x, y in zip(lhs_args, rhs_args) if x != y]


def _insert(equations, i, j, new):
    out = [e for k, e in enumerate(equations[:i]) if k != j]
    out.extend(new)
    out.extend(e for k, e in enumerate(equations) if k > i and k != j)
    return out


def progress_measure(state: UnifState, shape: RuleShape):
    """Lexicographic measure every non-failing rule strictly decreases."""
    unary = sum(1 for e in state.equations if e.kind == KIND_FUN and e.symbol == shape.unary)
    wide = sum(1 for e in state.equations if e.kind == KIND_FUN and e.symbol == shape.wide)
    counts = defaultdict(int)
    for e in state.equations:
        for v in e.occurrences():
            counts[v] += 1
    for c in state.gamma:
        counts[c.var] += 1
    lhs_count = defaultdict(int)
    for e in state.equations:
        lhs_count[e.lhs] += 1
    unsolved = sum(1 for v, n in counts.items() if not (n == 1 and lhs_count[v] == 1))
    asym = sum(1 for e in state.equations if e.asym)
    return asym, unary, wide, unsolved, len(state.equations)


def is_dag_solved(equations: List[StdEq]) -> bool:
    lhs = [e.lhs for e in equations]
    if len(lhs) != len(set(lhs)):
        return False
    graph = nx.DiGraph()
    graph.add_nodes_from(lhs)
    for e in equations:
        for a in e.args:
            graph.add_edge(e.lhs, a)
    return nx.is_directed_acyclic_graph(graph)


@dataclass
class ClauseResult:
    assignment: Optional[Dict[str, str]]
    reason: str = ""
    domains: Optional[Dict[str, Tuple[str, ...]]] = None


def solve_constraints(equations: List[StdEq], gamma, shape: RuleShape) -> ClauseResult:
    """Settle the clause set against a DAG-solved equation set.

    Every variable bound to a function term cannot be a constant, and a
    variable bound to a constant is forced to it. Negative units then prune
    each disjunction; the first surviving constant is chosen.
    """
    forced, excluded, bound = {}, defaultdict(set), set()
    for e in equations:
        if e.kind == KIND_CONST:
            forced[e.lhs] = e.symbol
        elif e.kind == KIND_FUN:
            bound.add(e.lhs)
            for d in shape.redex_constants:
                excluded[e.lhs].add(d)
    for c in gamma:
        if isinstance(c, NegUnit):
            excluded[c.var].add(c.const)
    for x, d in forced.items():
        if d in excluded[x]:
            return ClauseResult(None, "{} = {} contradicts ~({} = {})".format(x, d, x, d))
    assignment = dict(forced)
    domains = {}
    for c in gamma:
        if not isinstance(c, PosPair):
            continue
        if c.var in forced:
            if forced[c.var] not in c.choices:
                return ClauseResult(None, "{} = {} falsifies {}".format(c.var, forced[c.var], c))
            domains[c.var] = (forced[c.var],)
            continue
        allowed = tuple(d for d in c.choices if d not in excluded[c.var])
        if c.var in bound or not allowed:
            return ClauseResult(None, "no constant left for {}".format(c))
        domains[c.var] = allowed
        assignment[c.var] = allowed[0]
    return ClauseResult(assignment, domains=domains)


def extract_unifier(equations: List[StdEq], assignment: Dict[str, str], theory, keep=None):
    """Back-substitute a DAG-solved form into a substitution with normalized values."""
    graph = nx.DiGraph()
    by_lhs = {e.lhs: e for e in equations}
    for e in equations:
        graph.add_node(e.lhs)
        for a in e.args:
            graph.add_edge(e.lhs, a)
    values: Dict[str, Term] = {}
    for v in reversed(list(nx.topological_sort(graph))):
        e = by_lhs.get(v)
        if e is None:
            if v in assignment:
                values[v] = Const(assignment[v])
            continue
        if e.kind == KIND_CONST:
            values[v] = Const(e.symbol)
        elif e.kind == KIND_VAR:
            values[v] = values.get(e.args[0], Var(e.args[0]))
        else:
            values[v] = App(e.symbol, tuple(values.get(a, Var(a)) for a in e.args))
    for v, d in assignment.items():
        values.setdefault(v, Const(d))
    keep = set(keep) if keep is not None else set(values)
    return {v: normalize(t, theory) for v, t in values.items() if v in keep and t != Var(v)}


def asym_unify(problem: Problem, trace=False, max_steps=100000):
    """Decide asymmetric unifiability of ``problem`` modulo R1 or R5.

    The returned unifier has been checked with the rewrite engine.
    """
    theory = theory_of(problem)
    shape = rule_shape(theory)
    equations = standardize(problem)
    eqs, gamma = remove_asymmetry(equations, shape)
    state = UnifState(eqs, gamma, ["standardize: {} equations".format(len(eqs))])
    for _ in range(max_steps):
        result = infer_step(state, shape)
        if result is None:
            break
        if isinstance(result, Fail):
            logger.debug("rule %s fails: %s", result.rule, result.detail)
            return Unsolvable("failure rule {}: {}".format(result.rule, result.detail), BACKEND,
                              fail_rule=result.rule, trace=tuple(state.trace + [result.rule]))
        _, state = result
    else:
        raise RuntimeError("inference did not terminate within {} steps".format(max_steps))

    if not is_dag_solved(state.equations):
        raise RuntimeError("inference stopped outside DAG-solved form")
    clauses = solve_constraints(state.equations, state.gamma, shape)
    if clauses.assignment is None:
        return Unsolvable("clauses unsatisfiable: " + clauses.reason, BACKEND,
                          fail_rule="clauses", trace=tuple(state.trace))

    keep = problem.variables
    for assignment in _assignments(clauses):
        sigma = extract_unifier(state.equations, assignment, theory, keep)
        if verify_solution(problem, sigma, theory):
            return Solvable(sigma, BACKEND, trace=tuple(state.trace) if trace else ())
        logger.debug("assignment %s failed verification", assignment)
    return Unsolvable("no clause assignment verified", BACKEND,
                      fail_rule="verification", trace=tuple(state.trace))


def _assignments(clauses: ClauseResult):
    yield clauses.assignment
    names = sorted(clauses.domains)
    for combo in it.product(*(clauses.domains[n] for n in names)):
        alt = dict(clauses.assignment)
        alt.update(zip(names, combo))
        if alt != clauses.assignment:
            yield alt


def ground_instance(sigma, problem, constant=None):
    """Instantiate the free variables left by a unifier with one constant."""
    constant = constant or ("c" if problem.theory == R1 else "e")
    free = set(problem.variables)
    for t in sigma.values():
        free.update(term_variables(t))
    ground = {v: Const(constant) for v in free}
    out = {}
    for v in set(problem.variables) | set(sigma):
        t = sigma.get(v, Var(v))
        out[v] = _ground(t, ground)
    return out


def _ground(t, ground):
    if isinstance(t, Var):
        return ground.get(t.name, t)
    if isinstance(t, Const):
        return t
    return App(t.symbol, tuple(_ground(a, ground) for a in t.args))


def to_problem(equations: List[StdEq], theory: str, constants=None) -> Problem:
    items = [Item(Var(e.lhs), e.rhs_term(), ASYM if e.asym else EQ) for e in equations]
    return Problem.build(theory, items, constants)
