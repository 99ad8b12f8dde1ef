"""ACUN problems as linear algebra over GF(2).

A sum of variables and free constants is a bit vector; equations become
XOR rows and disequations rows that must not vanish.
"""

import itertools as it
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from uniflab.util import UnsupportedProblem, SignatureError
from uniflab.modules.term.term import Var, Const, ZERO, plus, summands, instantiate
from uniflab.modules.term.problem import Problem, EQ, ASYM, DISEQ, ACUN
from uniflab.modules.rewrite.theories import ACUN_THEORY
from uniflab.modules.rewrite.engine import normalize, is_normal_form, verify_solution
from uniflab.modules.oracles.search import backtrack_search
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

BACKEND = "xor-linear"
GROUND_BACKEND = "acun-ground"


@dataclass
class XorRow:
    var_bits: np.ndarray
    const_bits: np.ndarray
    relation: str = EQ

    def copy(self):
        return XorRow(self.var_bits.copy(), self.const_bits.copy(), self.relation)

    def __iadd__(self, other):
        self.var_bits ^= other.var_bits
        self.const_bits ^= other.const_bits
        return self

    @property
    def has_vars(self):
        return bool(self.var_bits.any())

    @property
    def has_consts(self):
        return bool(self.const_bits.any())


@dataclass
class XorSystem:
    variables: Tuple[str, ...]
    constants: Tuple[str, ...]
    rows: List[XorRow]
    pivots: dict = field(default_factory=dict)

    def format_row(self, row):
        names = [v for v, b in zip(self.variables, row.var_bits) if b]
        names += [c for c, b in zip(self.constants, row.const_bits) if b]
        lhs = " + ".join(names) if names else "0"
        return "{} {} 0".format(lhs, "!=" if row.relation == DISEQ else "=")

    def __str__(self):
        return "\n".join(self.format_row(r) for r in self.rows)


def _linearize(t, variables, constants, row):
    for s in summands(t):
        if s == ZERO:
            continue
        if isinstance(s, Var):
            row.var_bits[variables.index(s.name)] ^= 1
        elif isinstance(s, Const):
            row.const_bits[constants.index(s.name)] ^= 1
        else:
            raise SignatureError("'{}' is not an ACUN term".format(s))


def build_xor_system(problem: Problem) -> XorSystem:
    """One row per item, over the declared variable and constant order."""
    if problem.has(ASYM):
        raise UnsupportedProblem("asymmetric items need the ground search backend")
    variables = tuple(problem.variables)
    constants = tuple(problem.constants)
    rows = []
    for item in problem.items:
        row = XorRow(np.zeros(len(variables), dtype=np.uint8),
                     np.zeros(len(constants), dtype=np.uint8), item.relation)
        _linearize(normalize(item.lhs, ACUN_THEORY), variables, constants, row)
        _linearize(normalize(item.rhs, ACUN_THEORY), variables, constants, row)
        rows.append(row)
    return XorSystem(variables, constants, rows)


def gaussian_eliminate(system: XorSystem, inject_bug=False) -> XorSystem:
    """Reduced echelon form along the declared variable order.

    Pivots are taken from equations only and eliminated from every other
    row, disequations included. ``inject_bug`` skips one elimination so the
    crosscheck harness can prove it notices.
    """
    rows = [r.copy() for r in system.rows]
    pivots = {}
    used = set()
    skipped = not inject_bug
    for col, var in enumerate(system.variables):
        pivot = next((k for k, r in enumerate(rows)
                      if k not in used and r.relation == EQ and r.var_bits[col]), None)
        if pivot is None:
            continue
        used.add(pivot)
        pivots[var] = pivot
        for k, r in enumerate(rows):
            if k != pivot and r.var_bits[col]:
                if not skipped:
                    skipped = True
                    continue
                r += rows[pivot]
    return XorSystem(system.variables, system.constants, rows, pivots)


def _mask(bits):
    return sum(1 << k for k, b in enumerate(bits) if b)


def _mask_term(mask, constants):
    return plus(*[Const(c) for k, c in enumerate(constants) if mask >> k & 1])


def decide_disunif_acun(problem: Problem, inject_bug=False, search_cap=4096):
    """Decide an ACUN disunification problem with free constants.

    Solvable iff no equation reduces to a non-empty constant sum and no
    disequation reduces to ``0 != 0``.
    """
    system = gaussian_eliminate(build_xor_system(problem), inject_bug)
    for row in system.rows:
        if row.relation == EQ and not row.has_vars and row.has_consts:
            return Unsolvable("equation reduces to {}".format(system.format_row(row)), BACKEND)
        if row.relation == DISEQ and not row.has_vars and not row.has_consts:
            return Unsolvable("disequation reduces to 0 != 0", BACKEND)

    pivot_vars = set(system.pivots)
    free = [v for v in system.variables if v not in pivot_vars]
    diseqs = [r for r in system.rows if r.relation == DISEQ]
    involved = [v for v in free
                if any(r.var_bits[system.variables.index(v)] for r in diseqs)]
    values = _choose_free_values(system, involved, diseqs, search_cap)

    sigma = {}
    for v in free:
        if v in values:
            sigma[v] = values[v]
    for var, k in system.pivots.items():
        row = system.rows[k]
        parts = [sigma.get(v, Var(v)) for v, b in zip(system.variables, row.var_bits)
                 if b and v != var]
        parts += [Const(c) for c, b in zip(system.constants, row.const_bits) if b]
        sigma[var] = normalize(plus(*parts), ACUN_THEORY)
    if not verify_solution(problem, sigma, ACUN_THEORY):
        return Unsolvable("extracted substitution failed verification", BACKEND,
                          fail_rule="verification")
    return Solvable(sigma, BACKEND, stats={"pivots": len(system.pivots)})


def _choose_free_values(system, involved, diseqs, search_cap):
    """Ground values for the free variables a disequation mentions.

    Small spaces are searched exhaustively; otherwise a variable that cannot
    be grounded is left symbolic, which keeps its disequations true.
    """
    n = len(system.constants)
    index = {v: system.variables.index(v) for v in involved}
    rows = [(_mask(r.const_bits), [v for v in involved if r.var_bits[index[v]]]) for r in diseqs]

    def violated(assign):
        bad = []
        for k, (const, vs) in enumerate(rows):
            if any(v not in assign for v in vs):
                continue
            acc = const
            for v in vs:
                acc ^= assign[v]
            if acc == 0:
                bad.append(k)
        return bad

    if n and (1 << n) ** len(involved) <= search_cap:
        order = sorted(range(1 << n), key=lambda m: (bin(m).count("1") != 1, m))
        for combo in it.product(order, repeat=len(involved)):
            assign = dict(zip(involved, combo))
            if not violated(assign):
                return {v: _mask_term(m, system.constants) for v, m in assign.items()}

    assign = {v: 1 for v in involved} if n else {}
    for k in violated(assign):
        for v in rows[k][1]:
            assign.pop(v, None)
    logger.debug("leaving %d free variables symbolic", len(involved) - len(assign))
    return {v: _mask_term(m, system.constants) for v, m in assign.items()}


def ground_asym_unify_acun(problem: Problem, node_cap=2_000_000):
    """Search ground unifiers whose values are sums of declared constants.

    Asymmetric right-hand sides are pruned as soon as the assigned part
    already contains a repeated or zero summand.
    """
    if problem.has(DISEQ):
        raise UnsupportedProblem("disequations go to the linear backend")
    consts = [Const(c) for c in problem.constants]
    subsets = []
    for size in list(range(1, len(consts) + 1)) + [0]:
        for combo in it.combinations(consts, size):
            subsets.append(plus(*combo) if combo else ZERO)
    candidates = {v: subsets for v in problem.variables}
    asym_rhs = [item.rhs for item in problem.items if item.relation == ASYM]

    def prune(partial):
        for rhs in asym_rhs:
            if not is_normal_form(instantiate(partial, rhs), ACUN_THEORY):
                return True
        return False

    sigma, nodes = backtrack_search(problem, candidates, ACUN_THEORY, prune=prune, node_cap=node_cap)
    if sigma is None:
        return Unsolvable("no ground unifier over sums of {}".format(
            ", ".join(problem.constants) or "no constants"), GROUND_BACKEND, stats={"nodes": nodes})
    return Solvable(sigma, GROUND_BACKEND, stats={"nodes": nodes})
