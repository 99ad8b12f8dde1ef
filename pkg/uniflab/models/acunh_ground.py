"""Ground disunification modulo ACUNh via Smith normal forms over GF(2)[h].

A ground ACUNh term is a sum of ``h^i(c)``; grouping by constant turns it
into one polynomial per constant, so a linear problem splits into one
system per constant sharing the same coefficient matrix.
"""

import itertools as it
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from uniflab.util import FreshNames, UnsupportedProblem, SignatureError
from uniflab.modules.term.term import Var, Const, App, ZERO, plus, h_power, summands
from uniflab.modules.term.problem import Problem, ASYM, DISEQ
from uniflab.modules.rewrite.theories import ACUNH_THEORY
from uniflab.modules.rewrite.engine import normalize, verify_solution
from uniflab.modules.linalg.gf2poly import GF2Poly, ZERO_POLY, poly_matrix
from uniflab.modules.linalg.snf import solve_system_snf, NoSolution
from uniflab.models.decision import Solvable, Unsolvable

logger = logging.getLogger(__name__)

BACKEND = "acunh-snf"


@dataclass
class LinearForm:
    var_coeffs: Dict[str, GF2Poly]
    const_coeffs: Dict[str, GF2Poly]


@dataclass
class ComponentSystem:
    constant: str
    A: np.ndarray
    b: List[GF2Poly]


@dataclass
class LinearProblem:
    variables: Tuple[str, ...]
    diseq_vars: Tuple[str, ...]
    forms: List[LinearForm]
    systems: List[ComponentSystem]


def linear_form(t) -> LinearForm:
    """Coefficients of a normalized ACUNh term per variable and per constant."""
    form = LinearForm({}, {})
    for s in summands(normalize(t, ACUNH_THEORY)):
        if s == ZERO:
            continue
        k = 0
        while isinstance(s, App) and s.symbol == "h":
            s, k = s.args[0], k + 1
        if isinstance(s, Var):
            table = form.var_coeffs
        elif isinstance(s, Const):
            table = form.const_coeffs
        else:
            raise SignatureError("'{}' is not an ACUNh term".format(s))
        table[s.name] = table.get(s.name, ZERO_POLY) + GF2Poly.monomial(k)
    return form


def _add(f: LinearForm, g: LinearForm) -> LinearForm:
    out = LinearForm(dict(f.var_coeffs), dict(f.const_coeffs))
    for table, other in ((out.var_coeffs, g.var_coeffs), (out.const_coeffs, g.const_coeffs)):
        for k, v in other.items():
            table[k] = table.get(k, ZERO_POLY) + v
    return out


def build_component_systems(problem: Problem) -> LinearProblem:
    """One linear system ``A X = b_c`` per declared constant ``c``.

    Each disequation ``e1 != e2`` becomes ``z = e1 + e2`` with ``z != 0`` for
    a fresh ``z``.
    """
    if problem.has(ASYM):
        raise UnsupportedProblem("asymmetric items need the automata backend")
    fresh = FreshNames(taken=problem.variables)
    variables = list(problem.variables)
    diseq_vars, forms = [], []
    for item in problem.items:
        form = _add(linear_form(item.lhs), linear_form(item.rhs))
        if item.relation == DISEQ:
            z = fresh()
            variables.append(z)
            diseq_vars.append(z)
            form.var_coeffs[z] = GF2Poly(1)
        forms.append(form)
    m, n = len(forms), len(variables)
    rows = [[f.var_coeffs.get(v, ZERO_POLY) for v in variables] for f in forms]
    A = poly_matrix(rows) if m else np.empty((0, n), dtype=object)
    systems = [ComponentSystem(c, A, [f.const_coeffs.get(c, ZERO_POLY) for f in forms])
               for c in problem.constants]
    return LinearProblem(tuple(variables), tuple(diseq_vars), forms, systems)


def poly_term(p: GF2Poly, constant: str):
    c = Const(constant)
    return plus(*[h_power(k, c) for k in p.exponents()]) if p else ZERO


def _parameter_values(limit=2):
    """``0``, ``1`` and the powers of ``h`` up to ``h^(limit-1)``."""
    yield ZERO_POLY
    for k in range(limit):
        yield GF2Poly.monomial(k)


def _separated_choice(solution) -> List[GF2Poly]:
    """Free parameters ``h^(D(k+1))`` for the ``k``-th basis column.

    ``D`` exceeds every degree in the solution, so each column lands in its
    own band of degrees and no coordinate that can be non-zero cancels.
    """
    entries = list(solution.particular) + list(solution.free_basis.flat)
    band = 1 + max([e.degree for e in entries] + [0])
    return [GF2Poly.monomial(band * (k + 1)) for k in range(solution.free_basis.shape[1])]


def _candidate_choices(widths, small_cap):
    """Parameter vectors, smallest first, ending with the band choice.

    Every single parameter is tried at ``1``, then all vectors over
    ``{0, 1, h}`` while there are at most ``small_cap`` of them.
    """
    total = sum(widths)
    yield "zero", [ZERO_POLY] * total
    for k in range(total):
        params = [ZERO_POLY] * total
        params[k] = GF2Poly(1)
        yield "single", params
    values = list(_parameter_values())
    if len(values) ** total <= small_cap:
        for params in it.product(values, repeat=total):
            yield "small", list(params)
    yield "separated", None


def decide_ground_disunif_acunh(problem: Problem, small_cap=20000):
    """Decide ground disunifiability modulo ACUNh.

    Solvable iff every per-constant system is solvable and each disequation
    variable can be non-zero in at least one component. Non-zero affine
    forms over GF(2)[h] never cover the whole parameter space, so the
    separated choice always succeeds when the small ones do not.
    """
    lp = build_component_systems(problem)
    solutions = []
    for cs in lp.systems:
        sol = solve_system_snf(cs.A, cs.b)
        if isinstance(sol, NoSolution):
            return Unsolvable("system for constant {}: {}".format(cs.constant, sol.reason), BACKEND)
        solutions.append(sol)

    index = {v: j for j, v in enumerate(lp.variables)}
    for z in lp.diseq_vars:
        j = index[z]
        if not any(not s.particular[j].is_zero() or s.row_is_free(j) for s in solutions):
            return Unsolvable("a disequation is forced to 0 != 0", BACKEND)

    widths = [s.free_basis.shape[1] for s in solutions]
    choice, stage, tried = None, None, 0
    for stage, params in _candidate_choices(widths, small_cap):
        tried += 1
        if params is None:
            values = [s.instantiate(_separated_choice(s)) for s in solutions]
        else:
            values, k = [], 0
            for s, w in zip(solutions, widths):
                values.append(s.instantiate(params[k:k + w]))
                k += w
        if all(any(not vals[index[z]].is_zero() for vals in values) for z in lp.diseq_vars):
            choice = values
            break
    if choice is None:
        return Unsolvable("separated parameter choice leaves a disequation at zero", BACKEND,
                          fail_rule="verification")
    logger.debug("parameter choice found at stage %s after %d tries", stage, tried)

    sigma = {}
    for v in problem.variables:
        j = index[v]
        parts = [poly_term(vals[j], cs.constant) for vals, cs in zip(choice, lp.systems)]
        sigma[v] = normalize(plus(*parts), ACUNH_THEORY)
    if not verify_solution(problem, sigma, ACUNH_THEORY):
        return Unsolvable("extracted substitution failed verification", BACKEND, fail_rule="verification")
    return Solvable(sigma, BACKEND, stats={"parameter_choices": tried, "stage": stage})
