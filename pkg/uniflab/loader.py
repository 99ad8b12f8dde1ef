from pathlib import Path
import random

import regex
import networkx as nx

from uniflab.util import InstanceFormatError, UniflabError, exists
from uniflab.modules.term.term import Var, Const, App, Symbol, plus, print_term, h_power
from uniflab.modules.term.parser import parse_term
from uniflab.modules.term.problem import (
    Problem, Item, EQ, ASYM, DISEQ, RELATION_TOKENS, THEORIES, CUSTOM,
    R1, R4, R5, ACUN, ACUNH, theory_signature, DEFAULT_CONSTANTS,
)
from uniflab.modules.oracles.instances import CnfFormula, Graph

_FUNC_DECL = regex.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*|\+)/(?P<arity>\d+)$")
_KEYWORD_RELATION = {"eq": EQ, "asym": ASYM, "diseq": DISEQ}


def instance_paths(path, pattern="*"):
    """Files under a directory (recursively), or the single file given."""
    path = Path(path)
    if path.is_dir():
        found = sorted(p for p in path.glob("**/" + pattern) if p.is_file())
        if not found:
            raise InstanceFormatError("directory contains no instance files", path)
        print('Found {} instance file(s) under given path {}!'.format(len(found), path))
        return found
    if path.is_file():
        return [path]
    raise InstanceFormatError("no such file or directory", path)


def _read(source):
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        return Path(source).read_text(), str(source)
    return source, None


def parse_problem(text, path=None):
    """Parse the line-oriented problem format.

    ::

        theory acun
        consts c1 c2 c3
        vars y1 y2 z1
        asym c1 + c2 + c3 =v y1 + y2 + z1

    ``eq``, ``asym`` and ``diseq`` lines use ``=``, ``=v`` and ``!=``.
    A ``custom`` theory adds ``funcs f/2 ...`` and ``rule l -> r`` lines.
    """
    theory, consts, names, funcs = None, None, None, []
    rule_lines, item_lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "theory":
            if rest not in THEORIES:
                raise InstanceFormatError("unknown theory '{}'".format(rest), path, lineno)
            theory = rest
        elif key == "consts":
            consts = tuple(rest.split())
        elif key == "vars":
            names = tuple(rest.split())
        elif key == "funcs":
            for decl in rest.split():
                m = _FUNC_DECL.match(decl)
                if m is None:
                    raise InstanceFormatError("bad function declaration '{}'".format(decl), path, lineno)
                funcs.append(Symbol(m.group("name"), int(m.group("arity"))))
        elif key == "rule":
            rule_lines.append((lineno, rest))
        elif key in _KEYWORD_RELATION:
            item_lines.append((lineno, _KEYWORD_RELATION[key], rest))
        else:
            raise InstanceFormatError("unknown keyword '{}'".format(key), path, lineno)
    if theory is None:
        raise InstanceFormatError("missing 'theory' line", path)

    open_sig = theory_signature(theory, consts, None, funcs)
    rules = []
    for lineno, rest in rule_lines:
        if theory != CUSTOM:
            raise InstanceFormatError("rules are only allowed for a custom theory", path, lineno)
        lhs, sep, rhs = rest.partition("->")
        if not sep:
            raise InstanceFormatError("rule needs '->'", path, lineno)
        rules.append((_term(lhs, open_sig, path, lineno), _term(rhs, open_sig, path, lineno)))

    sig = theory_signature(theory, consts, names, funcs)
    items = []
    for lineno, relation, rest in item_lines:
        token = RELATION_TOKENS[relation]
        lhs, sep, rhs = rest.partition(" {} ".format(token))
        if not sep:
            lhs, sep, rhs = rest.partition(token)
        if not sep or (relation == EQ and rhs.startswith("v")):
            raise InstanceFormatError("expected '{}' in {} line".format(token, relation), path, lineno)
        items.append(Item(_term(lhs, sig, path, lineno), _term(rhs, sig, path, lineno), relation))
    return Problem.build(theory, items, consts, names, rules, funcs)


def _term(text, signature, path, lineno):
    try:
        return parse_term(text.strip(), signature)
    except UniflabError as e:
        raise InstanceFormatError(str(e), path, lineno) from e


def format_problem(problem: Problem) -> str:
    lines = ["theory {}".format(problem.theory)]
    if problem.constants:
        lines.append("consts {}".format(" ".join(problem.constants)))
    if problem.variables:
        lines.append("vars {}".format(" ".join(problem.variables)))
    extra = [s for s in problem.functions if s.name != "+"]
    if extra:
        lines.append("funcs {}".format(" ".join("{}/{}".format(s.name, s.arity) for s in extra)))
    for lhs, rhs in problem.rules:
        lines.append("rule {} -> {}".format(print_term(lhs), print_term(rhs)))
    keyword = {v: k for k, v in _KEYWORD_RELATION.items()}
    for item in problem.items:
        lines.append("{} {} {} {}".format(keyword[item.relation], print_term(item.lhs),
                                          RELATION_TOKENS[item.relation], print_term(item.rhs)))
    return "\n".join(lines) + "\n"


def read_problem(source):
    text, path = _read(source)
    return parse_problem(text, path)


def write_problem(problem, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_problem(problem))


def read_dimacs(source) -> CnfFormula:
    """DIMACS CNF: ``c`` comments, one ``p cnf V C`` header, 0-terminated clauses."""
    text, path = _read(source)
    header, clauses, current = None, [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InstanceFormatError("bad header '{}'".format(line), path, lineno)
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise InstanceFormatError("clause before 'p cnf' header", path, lineno)
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise InstanceFormatError("non-integer literal in '{}'".format(line), path, lineno)
        for lit in lits:
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise InstanceFormatError("missing 'p cnf' header", path)
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise InstanceFormatError("header announces {} clauses, found {}".format(header[1], len(clauses)), path)
    return CnfFormula(header[0], tuple(clauses))


def write_dimacs(formula: CnfFormula) -> str:
    lines = ["p cnf {} {}".format(formula.num_vars, len(formula.clauses))]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"


def read_edge_list(source) -> Graph:
    """``p edge N M`` header then ``e u v`` lines; bare ``u v`` lines are accepted too."""
    text, path = _read(source)
    n, edges = None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4:
                raise InstanceFormatError("bad header", path, lineno)
            n = int(parts[2])
            continue
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) != 2:
            raise InstanceFormatError("expected an edge, got '{}'".format(raw.strip()), path, lineno)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InstanceFormatError("non-integer vertex in '{}'".format(raw.strip()), path, lineno)
    if n is None:
        n = max((max(e) for e in edges), default=0)
    return Graph(n, tuple(edges))


def write_edge_list(graph: Graph) -> str:
    lines = ["p edge {} {}".format(graph.num_vertices, len(graph.edges))]
    lines += ["e {} {}".format(u, v) for u, v in graph.edges]
    return "\n".join(lines) + "\n"


# random instances for the crosscheck suites

def random_cnf(rng: random.Random, num_vars, num_clauses, k=3) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), min(k, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return CnfFormula(num_vars, tuple(clauses))


def random_nae(rng: random.Random, num_vars, num_clauses, monotone=True) -> CnfFormula:
    f = random_cnf(rng, num_vars, num_clauses)
    if monotone:
        return CnfFormula(num_vars, tuple(tuple(abs(l) for l in c) for c in f.clauses))
    return f


def random_graph(rng: random.Random, num_vertices, edge_prob=0.5) -> Graph:
    g = nx.gnp_random_graph(num_vertices, edge_prob, seed=rng.randrange(1 << 30))
    return Graph.from_networkx(g)


def odd_wheel(spokes) -> Graph:
    """Wheel whose rim has an odd number of vertices: not 3-colorable."""
    if spokes % 2 == 0:
        raise ValueError("an odd wheel needs an odd rim")
    return Graph.from_networkx(nx.wheel_graph(spokes + 1))


def random_term(rng, signature, names, depth):
    """Random term over ``signature`` with leaves drawn from ``names`` and its constants."""
    leaves = [Var(v) for v in names] + [Const(c) for c in signature.constants]
    funcs = [s for s in signature.functions.values() if s.arity > 0]
    if depth <= 0 or not funcs or rng.random() < 0.4:
        return rng.choice(leaves)
    s = rng.choice(funcs)
    args = [random_term(rng, signature, names, depth - 1) for _ in range(s.arity)]
    if s.name == "+":
        return plus(*args, ac=signature.ac)
    return App(s.name, tuple(args))


def random_syntactic_problem(rng, theory=R1, num_vars=3, num_items=2, depth=1, asym_prob=0.5):
    names = tuple("x{}".format(j) for j in range(1, num_vars + 1))
    sig = theory_signature(theory, None, names)
    items = []
    for _ in range(num_items):
        lhs = Var(rng.choice(names))
        rhs = random_term(rng, sig, names, depth)
        items.append(Item(lhs, rhs, ASYM if rng.random() < asym_prob else EQ))
    return Problem.build(theory, items, DEFAULT_CONSTANTS[theory], names)


def random_xor_problem(rng, num_vars=3, num_consts=2, num_items=3, diseq_prob=0.4):
    names = tuple("x{}".format(j) for j in range(1, num_vars + 1))
    consts = tuple("c{}".format(j) for j in range(1, num_consts + 1))
    atoms = [Var(v) for v in names] + [Const(c) for c in consts]
    items = []
    for _ in range(num_items):
        lhs = plus(*rng.sample(atoms, rng.randint(1, min(3, len(atoms)))))
        rhs = plus(*rng.sample(atoms, rng.randint(0, min(2, len(atoms)))))
        items.append(Item(lhs, rhs, DISEQ if rng.random() < diseq_prob else EQ))
    return Problem.build(ACUN, items, consts, names)


def random_acunh_problem(rng, num_vars=2, num_consts=1, num_items=2, degree=2,
                         asym_prob=0.5, diseq_prob=0.0):
    names = tuple("x{}".format(j) for j in range(1, num_vars + 1))
    consts = tuple("c{}".format(j) for j in range(1, num_consts + 1))
    atoms = [h_power(k, Var(v)) for v in names for k in range(degree + 1)]
    atoms += [h_power(k, Const(c)) for c in consts for k in range(degree + 1)]
    items = []
    for _ in range(num_items):
        lhs = Var(rng.choice(names))
        rhs = plus(*rng.sample(atoms, rng.randint(1, 2)))
        roll = rng.random()
        relation = DISEQ if roll < diseq_prob else ASYM if roll < diseq_prob + asym_prob else EQ
        items.append(Item(lhs, rhs, relation))
    return Problem.build(ACUNH, items, consts, names)
