import logging
from collections import defaultdict

from uniflab.util import SizeCapExceeded
from uniflab.modules.term.term import apply_subst, variables
from uniflab.modules.term.problem import variables_of
from uniflab.modules.rewrite.engine import verify_solution

logger = logging.getLogger(__name__)


def backtrack_search(problem, candidates, theory, prune=None, derived=None, node_cap=1_000_000):
    """Depth-first search for a substitution satisfying every item.

    Args:
      candidates: Values to try for each searched variable, in order.
      prune: Optional callable on the partial substitution; ``True`` cuts the branch.
      derived: Variables whose value is a term over searched variables.
      node_cap: Raise ``SizeCapExceeded`` after this many assignments.

    Each item is checked as soon as every variable it depends on is set.
    Returns the substitution (or ``None``) and the number of nodes visited.
    """
    derived = derived or {}
    first = {}
    for item in problem.items:
        for v in variables_of(item):
            first.setdefault(v, len(first))
    order = sorted((v for v in candidates if v not in derived), key=lambda v: first.get(v, len(first)))
    pos = {v: k for k, v in enumerate(order)}

    def deps(v):
        return variables(derived[v]) if v in derived else (v,)

    stages = defaultdict(list)
    for item in problem.items:
        need = {u for v in variables_of(item) for u in deps(v)}
        stages[max((pos[v] for v in need if v in pos), default=-1)].append(item)

    def complete(partial):
        out = dict(partial)
        for v, t in derived.items():
            if all(u in partial for u in variables(t)):
                out[v] = apply_subst(partial, t, theory.ac)
        return out

    def check(stage, partial):
        full = complete(partial)
        items = stages.get(stage)
        if items and not verify_solution(problem.with_items(items), full, theory):
            return False
        return not (prune and prune(full))

    nodes = 0
    sigma = {}

    def rec(k):
        nonlocal nodes
        if k == len(order):
            return True
        v = order[k]
        for t in candidates[v]:
            nodes += 1
            if nodes > node_cap:
                raise SizeCapExceeded("search", nodes, node_cap)
            sigma[v] = t
            if check(k, sigma) and rec(k + 1):
                return True
        sigma.pop(v, None)
        return False

    if not check(-1, sigma):
        return None, 0
    found = rec(0)
    logger.debug("search visited %d nodes, found=%s", nodes, found)
    return (complete(sigma), nodes) if found else (None, nodes)
