import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from uniflab.modules.linalg.gf2poly import (
    GF2Poly, ZERO_POLY, identity, matmul, poly_matrix,
)

logger = logging.getLogger(__name__)


@dataclass
class SmithForm:
    """``D = P A Q`` with ``D`` diagonal and each entry dividing the next."""

    D: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    rank: int

    @property
    def diagonal(self) -> List[GF2Poly]:
        return [self.D[i, i] for i in range(min(self.D.shape))]


def _min_degree_entry(A, t):
    best = None
    m, n = A.shape
    for i in range(t, m):
        for j in range(t, n):
            e = A[i, j]
            if not e.is_zero() and (best is None or e.degree < best[0]):
                best = (e.degree, i, j)
    return best


def _swap_rows(M, i, j):
    if i != j:
        M[[i, j], :] = M[[j, i], :]


def _swap_cols(M, i, j):
    if i != j:
        M[:, [i, j]] = M[:, [j, i]]


def _add_row(M, target, source, q):
    # row_target += q * row_source
    for k in range(M.shape[1]):
        M[target, k] = M[target, k] + q * M[source, k]


def _add_col(M, target, source, q):
    for k in range(M.shape[0]):
        M[k, target] = M[k, target] + q * M[k, source]


def smith_normal_form(A: np.ndarray) -> SmithForm:
    """Smith normal form over GF(2)[h] by Euclidean row and column steps.

    Every unit of GF(2)[h] is 1, so the diagonal comes out monic without
    rescaling. ``P`` and ``Q`` record the row and column operations.
    """
    A = poly_matrix(A.tolist()) if A.size else A.copy()
    m, n = A.shape
    P, Q = identity(m), identity(n)
    t = 0
    while t < min(m, n):
        best = _min_degree_entry(A, t)
        if best is None:
            break
        _, i, j = best
        _swap_rows(A, t, i)
        _swap_rows(P, t, i)
        _swap_cols(A, t, j)
        _swap_cols(Q, t, j)
        p = A[t, t]
        clean = True
        for i in range(t + 1, m):
            if not A[i, t].is_zero():
                q, r = divmod(A[i, t], p)
                _add_row(A, i, t, q)
                _add_row(P, i, t, q)
                clean = clean and r.is_zero()
        for j in range(t + 1, n):
            if not A[t, j].is_zero():
                q, r = divmod(A[t, j], p)
                _add_col(A, j, t, q)
                _add_col(Q, j, t, q)
                clean = clean and r.is_zero()
        if not clean:
            # a smaller-degree remainder is now in row or column t
            continue
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                    if not p.divides(A[i, j])), None)
        if bad is not None:
            _add_row(A, t, bad[0], GF2Poly(1))
            _add_row(P, t, bad[0], GF2Poly(1))
            continue
        t += 1
    rank = sum(1 for k in range(min(m, n)) if not A[k, k].is_zero())
    logger.debug("smith form of %dx%d matrix has rank %d", m, n, rank)
    return SmithForm(A, P, Q, rank)


@dataclass
class NoSolution:
    reason: str
    row: Optional[int] = None


@dataclass
class GeneralSolution:
    """Solutions ``particular + free_basis @ z`` for arbitrary polynomial ``z``."""

    particular: List[GF2Poly]
    free_basis: np.ndarray

    def row_is_free(self, j: int) -> bool:
        return any(not e.is_zero() for e in self.free_basis[j, :])

    def instantiate(self, params) -> List[GF2Poly]:
        out = list(self.particular)
        for k, z in enumerate(params):
            if z.is_zero():
                continue
            for j in range(len(out)):
                out[j] = out[j] + self.free_basis[j, k] * z
        return out


def solve_system_snf(A: np.ndarray, b) -> "GeneralSolution | NoSolution":
    """Solve ``A X = b`` over GF(2)[h].

    With ``D = P A Q`` the system becomes ``D Y = P b`` for ``X = Q Y``;
    it is solvable iff each diagonal entry divides its right-hand side and
    the rows past the rank have a zero right-hand side.
    """
    m, n = A.shape
    form = smith_normal_form(A)
    rhs = poly_matrix([[v] for v in b]) if m else np.empty((0, 1), dtype=object)
    c = [e for e in matmul(form.P, rhs)[:, 0]] if m else []
    r = form.rank
    y = []
    for i in range(r):
        q, rem = divmod(c[i], form.D[i, i])
        if not rem.is_zero():
            return NoSolution("diagonal entry does not divide right-hand side", i)
        y.append(q)
    for i in range(r, m):
        if not c[i].is_zero():
            return NoSolution("inconsistent row past the rank", i)
    particular = [ZERO_POLY] * n
    for j in range(n):
        acc = ZERO_POLY
        for i in range(r):
            acc = acc + form.Q[j, i] * y[i]
        particular[j] = acc
    return GeneralSolution(particular, form.Q[:, r:])
