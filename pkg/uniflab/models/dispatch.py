import logging

from uniflab.util import UnsupportedProblem, VerificationError, Stopwatch
from uniflab.modules.term.problem import ASYM, DISEQ, R1, R4, R5, ACUN, ACUNH, CUSTOM
from uniflab.modules.rewrite.theories import theory_of
from uniflab.modules.rewrite.engine import verify_solution
from uniflab.models import asym_syntactic, xor_linear, acunh_ground, acunh_automata, reductions
from uniflab.modules.oracles.brute import brute_ground_search

logger = logging.getLogger(__name__)

BACKENDS = (
    "auto", "asym-syntactic", "xor-linear", "acun-ground", "acunh-snf",
    "acunh-automata", "r4-search", "r1-search", "ground-search",
)


def choose_backend(problem):
    """Pick the decision procedure for a theory and the relations it uses."""
    asym, diseq = problem.has(ASYM), problem.has(DISEQ)
    if asym and diseq:
        raise UnsupportedProblem("asymmetric equations together with disequations are not supported")
    if problem.theory in (R1, R5):
        if diseq:
            if problem.theory == R5:
                raise UnsupportedProblem("disequations modulo r5 are not supported")
            return "r1-search"
        return "asym-syntactic"
    if problem.theory == R4:
        return "r4-search"
    if problem.theory == ACUN:
        return "acun-ground" if asym else "xor-linear"
    if problem.theory == ACUNH:
        return "acunh-snf" if diseq else "acunh-automata"
    if problem.theory == CUSTOM:
        return "ground-search"
    raise UnsupportedProblem("no backend for theory '{}'".format(problem.theory))


def solve_problem(problem, backend="auto", depth=1, max_guesses=1 << 16, trace=False, inject_bug=False):
    """Run one backend and re-check its unifier with the rewrite engine.

    Returns the decision and the elapsed wall time in milliseconds.
    """
    if backend == "auto":
        backend = choose_backend(problem)
    logger.info("solving %s problem with %d items using %s", problem.theory, len(problem.items), backend)
    with Stopwatch() as sw:
        if backend == "asym-syntactic":
            decision = asym_syntactic.asym_unify(problem, trace=trace)
        elif backend == "xor-linear":
            decision = xor_linear.decide_disunif_acun(problem, inject_bug=inject_bug)
        elif backend == "acun-ground":
            decision = xor_linear.ground_asym_unify_acun(problem)
        elif backend == "acunh-snf":
            decision = acunh_ground.decide_ground_disunif_acunh(problem)
        elif backend == "acunh-automata":
            decision = acunh_automata.ground_asym_unify_acunh(problem, max_guesses=max_guesses)
        elif backend == "r4-search":
            decision = reductions.decide_asym_r4(problem, depth=depth)
        elif backend == "r1-search":
            decision = reductions.decide_disunif_r1(problem, depth=depth)
        elif backend == "ground-search":
            decision = brute_ground_search(problem, depth)
        else:
            raise UnsupportedProblem("unknown backend '{}'".format(backend))
    if decision.solvable and not verify_solution(problem, decision.substitution, theory_of(problem)):
        raise VerificationError("backend {} returned a unifier that does not verify".format(backend))
    return decision, sw.elapsed_ms
