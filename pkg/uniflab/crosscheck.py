"""Randomized and exhaustive agreement suites between solvers and oracles.

Every suite yields one :class:`Check` per instance. A check that does not
hold is a mismatch: it is reported to the callbacks (which may write a
replay file) and makes the run fail.
"""

import itertools as it
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from tqdm import tqdm

from uniflab.util import InstanceStream, Stopwatch, SizeCapExceeded
from uniflab.modules.term.term import Const, App, term_size, print_term
from uniflab.modules.term.problem import R1, R5, theory_signature
from uniflab.modules.rewrite.theories import R1_THEORY, R4_THEORY, R5_THEORY, theory_of
from uniflab.modules.rewrite.engine import (
    normalize, is_normal_form, joinable, verify_solution, redexes, rewrite_step,
    normalize_randomized, check_orientation,
)
from uniflab.modules.linalg.gf2poly import GF2Poly, matmul, matvec, determinant, poly_matrix
from uniflab.modules.linalg.snf import smith_normal_form, solve_system_snf, NoSolution
from uniflab.modules.oracles.brute import (
    brute_sat, brute_nae, brute_coloring, ground_terms,
    brute_ground_search,
)
from uniflab.modules.oracles.instances import is_proper_coloring
from uniflab.models import xor_linear
from uniflab.models.asym_syntactic import asym_unify, ground_instance
from uniflab.models.acunh_ground import decide_ground_disunif_acunh
from uniflab.models.acunh_automata import ground_asym_unify_acunh
from uniflab.models.reductions import (
    sat3_to_r1_disunif, coloring_to_acun_asym, nae3sat_to_r4_asym,
    decide_disunif_r1, decide_asym_r4, decode_sat, decode_coloring,
)
from uniflab.loader import (
    random_cnf, random_nae, random_graph, odd_wheel, random_term,
    random_syntactic_problem, random_xor_problem, random_acunh_problem,
)

logger = logging.getLogger(__name__)

DEFAULT_SIZE = 200
# snf-properties checks 500 matrices at the default size
SNF_MATRICES_PER_UNIT = 2.5


@dataclass
class Check:
    ok: bool
    detail: str = ""
    problem: Optional[Any] = None
    record: Dict[str, Any] = field(default_factory=dict)


def _suite_seed(seed, suite):
    return "{}:{}".format(seed, suite)


def _satisfies(formula, assignment, nae=False):
    for clause in formula.clauses:
        vals = [assignment[abs(l)] if l > 0 else not assignment[abs(l)] for l in clause]
        if not any(vals) or (nae and all(vals)):
            return False
    return True


# reduction equivalence

def r1_reduction(size, seed, **_):
    def factory(rng):
        return random_cnf(rng, rng.randint(1, 12), rng.randint(1, 20))

    for formula in InstanceStream(factory, size, _suite_seed(seed, "r1-reduction")):
        problem = sat3_to_r1_disunif(formula)
        expected = brute_sat(formula)
        decision = decide_disunif_r1(problem)
        ok = decision.solvable == expected and not decision.bounded
        if ok and decision.solvable:
            ok = _satisfies(formula, decode_sat(decision.substitution, formula.num_vars))
        yield Check(ok, "oracle says {}, solver says {}".format(expected, decision.solvable), problem,
                    {"solvable": decision.solvable, "nodes": decision.stats.get("nodes", 0)})


def coloring_reduction(size, seed, **_):
    def factory(rng):
        return random_graph(rng, rng.randint(2, 8), rng.choice((0.3, 0.5, 0.7)))

    for graph in InstanceStream(factory, size, _suite_seed(seed, "coloring-reduction")):
        problem = coloring_to_acun_asym(graph)
        expected = brute_coloring(graph)
        decision = xor_linear.ground_asym_unify_acun(problem)
        ok = decision.solvable == expected
        if ok and decision.solvable:
            ok = is_proper_coloring(graph, decode_coloring(decision.substitution, graph))
        yield Check(ok, "oracle says {}, solver says {}".format(expected, decision.solvable), problem,
                    {"solvable": decision.solvable, "edges": len(graph.edges)})


def nae_reduction(size, seed, **_):
    def factory(rng):
        return random_nae(rng, rng.randint(3, 12), rng.randint(1, 10))

    for formula in InstanceStream(factory, size, _suite_seed(seed, "nae-reduction")):
        problem = nae3sat_to_r4_asym(formula)
        expected = brute_nae(formula)
        decision = decide_asym_r4(problem)
        ok = decision.solvable == expected and not decision.bounded
        if ok and decision.solvable:
            ok = _satisfies(formula, decode_sat(decision.substitution, formula.num_vars), nae=True)
        yield Check(ok, "oracle says {}, solver says {}".format(expected, decision.solvable), problem,
                    {"solvable": decision.solvable})


# Smith normal form

def _random_matrix(rng, max_dim=4, max_degree=3):
    """A random matrix and a random vector to multiply it with."""
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    A = poly_matrix([[GF2Poly(rng.getrandbits(max_degree + 1)) for _ in range(n)] for _ in range(m)])
    return A, [GF2Poly(rng.getrandbits(max_degree + 1)) for _ in range(n)]


def snf_properties(size, seed, **_):
    count = int(size * SNF_MATRICES_PER_UNIT)
    for A, x in InstanceStream(_random_matrix, count, _suite_seed(seed, "snf-properties")):
        form = smith_normal_form(A)
        m, n = A.shape
        problems = []
        if not all(form.D[i, j].is_zero() for i in range(m) for j in range(n) if i != j):
            problems.append("D is not diagonal")
        diag = form.diagonal
        for i in range(len(diag) - 1):
            if not diag[i + 1].is_zero() and not diag[i].divides(diag[i + 1]):
                problems.append("{} does not divide {}".format(diag[i], diag[i + 1]))
        if not all(e == f for e, f in zip(matmul(matmul(form.P, A), form.Q).flat, form.D.flat)):
            problems.append("D != PAQ")
        if determinant(form.P) != 1 or determinant(form.Q) != 1:
            problems.append("P or Q is not unimodular")
        # b = A x, so the system is solvable
        b = matvec(A, x)
        sol = solve_system_snf(A, b)
        if isinstance(sol, NoSolution):
            problems.append("consistent system reported unsolvable: " + sol.reason)
        else:
            if matvec(A, sol.particular) != b:
                problems.append("particular solution does not solve the system")
            for k in range(sol.free_basis.shape[1]):
                if any(not e.is_zero() for e in matvec(A, list(sol.free_basis[:, k]))):
                    problems.append("free basis vector {} is not in the kernel".format(k))
        yield Check(not problems, "; ".join(problems) or "ok", None, {"rank": form.rank})


# rewrite lemmas for R1

def r1_lemmas(size, seed, **_):
    depth = 2 if size >= 50 else 1
    terms = ground_terms(R1, depth)
    small = ground_terms(R1, 1)
    a, b, c = Const("a"), Const("b"), Const("c")

    for theory in (R1_THEORY, R4_THEORY, R5_THEORY):
        yield Check(check_orientation(theory), "{} is not oriented by its precedence".format(theory.tag))

    # h(s) is irreducible unless s is a or b; f never reduces at the root
    for s in terms:
        ok = is_normal_form(App("h", (s,)), R1_THEORY) == (s not in (a, b))
        yield Check(ok, "h({}) irreducibility".format(print_term(s)))
    for s, t in it.product(small, repeat=2):
        yield Check(is_normal_form(App("f", (s, t)), R1_THEORY),
                    "f({}, {}) is reducible".format(print_term(s), print_term(t)))

    # h and f are injective on normal forms
    for s, t in it.product(terms, repeat=2):
        ok = joinable(App("h", (s,)), App("h", (t,)), R1_THEORY) == (s == t)
        yield Check(ok, "h injectivity on {}, {}".format(print_term(s), print_term(t)))
    for s1, s2, t1, t2 in it.product(small[:6], repeat=4):
        u, v = App("f", (s1, s2)), App("f", (t1, t2))
        ok = joinable(u, v, R1_THEORY) == (s1 == t1 and s2 == t2)
        yield Check(ok, "f injectivity on {}, {}".format(print_term(u), print_term(v)))

    # root conflict between h and f
    for s, t1, t2 in it.product(small, repeat=3):
        expected = (s, t1, t2) in ((a, a, c), (b, b, c))
        ok = joinable(App("h", (s,)), App("f", (t1, t2)), R1_THEORY) == expected
        yield Check(ok, "h({}) against f({}, {})".format(*map(print_term, (s, t1, t2))))

    # every step grows the term; any redex order reaches the same normal form
    rng = random.Random(_suite_seed(seed, "r1-lemmas"))
    sig = theory_signature(R1)
    for _ in range(size):
        t = random_term(rng, sig, (), rng.randint(1, 4))
        found = redexes(t, R1_THEORY)
        if found:
            stepped = rewrite_step(t, rng.choice(found), R1_THEORY, rng)
            yield Check(term_size(stepped) > term_size(t),
                        "step on {} does not grow the term".format(print_term(t)))
        ok = normalize_randomized(t, R1_THEORY, rng) == normalize(t, R1_THEORY)
        yield Check(ok, "strategies disagree on {}".format(print_term(t)))


# completeness grids

def _agrees(problem, decision, oracle, ground=None, complete=False):
    """Solver and bounded oracle agree if a positive verdict verifies and a
    negative verdict is not contradicted.

    A bounded negative is accepted only from incomplete backends; a
    ``complete`` backend is held to the oracle either way.
    """
    if decision.solvable:
        sigma = ground(decision.substitution) if ground else decision.substitution
        return verify_solution(problem, sigma, theory_of(problem)), "unifier does not verify"
    if decision.bounded and not complete:
        return True, "bounded"
    return not oracle.solvable, "solver found nothing, oracle found {}".format(oracle.substitution)


def asym_syntactic_grid(size, seed, **_):
    def factory(rng):
        theory = rng.choice((R1, R5))
        return random_syntactic_problem(rng, theory, rng.randint(1, 3), rng.randint(1, 3),
                                        depth=rng.randint(1, 2))

    for problem in InstanceStream(factory, size, _suite_seed(seed, "asym-syntactic-grid")):
        decision = asym_unify(problem)
        depth = 2 if problem.theory == R1 and len(problem.variables) == 1 else 1
        extra = () if problem.theory == R1 else ("e",)
        if decision.solvable:
            ok, why = _agrees(problem, decision, None, lambda s: ground_instance(s, problem))
        else:
            oracle = brute_ground_search(problem, depth, extra)
            ok, why = _agrees(problem, decision, oracle)
        yield Check(ok, why, problem, {"solvable": decision.solvable})


def xor_grid(size, seed, inject_bug=False, **_):
    def factory(rng):
        return random_xor_problem(rng, rng.randint(1, 3), rng.randint(0, 2), rng.randint(1, 4))

    for problem in InstanceStream(factory, size, _suite_seed(seed, "xor-grid")):
        decision = xor_linear.decide_disunif_acun(problem, inject_bug=inject_bug)
        # one fresh constant per variable stands in for the free constants
        fresh = tuple("k{}".format(j) for j in range(1, len(problem.variables) + 1))
        oracle = brute_ground_search(problem, 0, fresh)
        ok = decision.solvable == oracle.solvable
        if ok and decision.solvable:
            ok = verify_solution(problem, decision.substitution)
        yield Check(ok, "oracle says {}, solver says {}".format(oracle.solvable, decision.solvable), problem,
                    {"solvable": decision.solvable})


def _acunh_factory(asym_prob, diseq_prob):
    def factory(rng):
        consts = rng.randint(1, 2)
        num_vars = rng.randint(1, 3) if consts == 1 else rng.randint(1, 2)
        return random_acunh_problem(rng, num_vars, consts, rng.randint(1, 3), degree=rng.randint(1, 2),
                                    asym_prob=asym_prob, diseq_prob=diseq_prob)
    return factory


def _acunh_depth(problem):
    return 3 if len(problem.constants) == 1 else 2


def acunh_ground_grid(size, seed, **_):
    factory = _acunh_factory(0.0, 0.5)
    for problem in InstanceStream(factory, size, _suite_seed(seed, "acunh-ground-grid")):
        decision = decide_ground_disunif_acunh(problem)
        oracle = brute_ground_search(problem, _acunh_depth(problem))
        ok, why = _agrees(problem, decision, oracle, complete=True)
        yield Check(ok, why, problem, {"solvable": decision.solvable})


def acunh_automata_grid(size, seed, **_):
    factory = _acunh_factory(0.5, 0.0)
    for problem in InstanceStream(factory, size, _suite_seed(seed, "acunh-automata-grid")):
        try:
            decision = ground_asym_unify_acunh(problem)
        except SizeCapExceeded as e:
            yield Check(True, str(e), problem, {"skipped": True})
            continue
        oracle = brute_ground_search(problem, _acunh_depth(problem))
        ok, why = _agrees(problem, decision, oracle, complete=True)
        yield Check(ok, why, problem, {"solvable": decision.solvable})


# timings

def complexity_contrast(size, seed, **_):
    """Linear-algebra disunification against ground search on odd wheels.

    Only the verdicts are checked; timings and the fitted log-log slope are
    reported as metrics.
    """
    rng = random.Random(_suite_seed(seed, "complexity-contrast"))
    sizes = (10, 20, 40, 80, 160, 200) if size >= 50 else (10, 20, 40)
    times = []
    for n in sizes:
        problem = random_xor_problem(rng, n, 3, n)
        with Stopwatch() as sw:
            xor_linear.decide_disunif_acun(problem)
        times.append(max(sw.elapsed_ms, 1e-3))
        yield Check(True, "", None, {"xor_vars": n, "xor_ms": sw.elapsed_ms})
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    logger.info("xor-linear log-log slope %.2f over %s variables", slope, list(sizes))
    yield Check(True, "", None, {"xor_slope": slope})

    for spokes in ((3, 5, 7) if size >= 50 else (3, 5)):
        problem = coloring_to_acun_asym(odd_wheel(spokes))
        with Stopwatch() as sw:
            try:
                decision = xor_linear.ground_asym_unify_acun(problem)
            except SizeCapExceeded as e:
                logger.warning("odd wheel with %d spokes: %s", spokes, e)
                continue
        yield Check(not decision.solvable, "odd wheel with {} spokes reported colorable".format(spokes),
                    problem,
                    {"wheel_spokes": spokes, "wheel_ms": sw.elapsed_ms,
                     "wheel_log_ms": math.log(max(sw.elapsed_ms, 1e-3))})


SUITES = {
    "r1-reduction": r1_reduction,
    "coloring-reduction": coloring_reduction,
    "nae-reduction": nae_reduction,
    "snf-properties": snf_properties,
    "r1-lemmas": r1_lemmas,
    "asym-syntactic-grid": asym_syntactic_grid,
    "xor-grid": xor_grid,
    "acunh-ground-grid": acunh_ground_grid,
    "acunh-automata-grid": acunh_automata_grid,
    "complexity-contrast": complexity_contrast,
}


def run_suite(name, size=DEFAULT_SIZE, seed=42, callbacks=(), inject_bug=False, progress=True):
    """Run one suite and return its summary row."""
    suite = SUITES[name]
    for cb in callbacks:
        cb.on_suite_start(name, size)
    checked, mismatches, details = 0, 0, []
    with Stopwatch() as sw:
        checks = suite(size, seed, inject_bug=inject_bug) if size > 0 else ()
        for index, check in enumerate(tqdm(checks, desc=name, disable=not progress, leave=False)):
            checked += 1
            for cb in callbacks:
                cb.on_instance_end(name, index, dict(check.record, ok=check.ok))
            if check.ok:
                continue
            mismatches += 1
            details.append(check.detail)
            logger.warning("%s #%d mismatch: %s", name, index, check.detail)
            if check.problem is not None:
                for cb in callbacks:
                    cb.on_mismatch(name, index, check.problem, check.detail)
    summary = {"suite": name, "checked": checked, "mismatches": mismatches,
               "elapsed_ms": sw.elapsed_ms, "details": details[:5]}
    for cb in callbacks:
        cb.on_suite_end(name, summary)
    return summary


def run_crosscheck(suites=None, size=DEFAULT_SIZE, seed=42, callbacks=(), inject_bug=False, progress=True):
    names = list(suites) if suites else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError("unknown suite(s): {}".format(", ".join(unknown)))
    return [run_suite(n, size, seed, callbacks, inject_bug, progress) for n in names]
