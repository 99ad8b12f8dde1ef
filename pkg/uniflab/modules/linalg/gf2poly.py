"""Polynomials over GF(2) in one indeterminate, stored as int bitsets.

Bit ``k`` of the integer is the coefficient of ``h^k``. Addition is XOR and
multiplication is carry-less, so the ring operations never leave Python ints.
"""

from __future__ import annotations

from typing import Iterable, List, Tuple

import numpy as np


class GF2Poly(object):
    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("coefficient bitset must be non-negative")
        self.bits = int(bits)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "GF2Poly":
        bits = 0
        for k in exponents:
            bits ^= 1 << k
        return cls(bits)

    @classmethod
    def monomial(cls, k: int) -> "GF2Poly":
        return cls(1 << k)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; ``-1`` for zero."""
        return self.bits.bit_length() - 1

    def exponents(self) -> List[int]:
        out, bits, k = [], self.bits, 0
        while bits:
            if bits & 1:
                out.append(k)
            bits >>= 1
            k += 1
        return out

    def is_zero(self) -> bool:
        return self.bits == 0

    def __bool__(self):
        return self.bits != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.bits == other
        return isinstance(other, GF2Poly) and self.bits == other.bits

    def __hash__(self):
        return hash(("GF2Poly", self.bits))

    def __add__(self, other: "GF2Poly") -> "GF2Poly":
        return GF2Poly(self.bits ^ _bits(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other: "GF2Poly") -> "GF2Poly":
        a, b, out = self.bits, _bits(other), 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return GF2Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "GF2Poly") -> Tuple["GF2Poly", "GF2Poly"]:
        d = _bits(other)
        if d == 0:
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = 0, self.bits
        dd = d.bit_length()
        while r and r.bit_length() >= dd:
            shift = r.bit_length() - dd
            q ^= 1 << shift
            r ^= d << shift
        return GF2Poly(q), GF2Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "GF2Poly") -> bool:
        if self.is_zero():
            return GF2Poly(_bits(other)).is_zero()
        return (GF2Poly(_bits(other)) % self).is_zero()

    def __repr__(self):
        return "GF2Poly({})".format(self)

    def __str__(self):
        if not self.bits:
            return "0"
        parts = []
        for k in reversed(self.exponents()):
            parts.append("1" if k == 0 else "h" if k == 1 else "h^{}".format(k))
        return " + ".join(parts)


def _bits(p):
    return p.bits if isinstance(p, GF2Poly) else int(p)


ZERO_POLY = GF2Poly(0)
ONE_POLY = GF2Poly(1)


def poly_matrix(rows) -> np.ndarray:
    """Object array of ``GF2Poly`` from nested ints or polynomials."""
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            v = rows[i][j]
            out[i, j] = v if isinstance(v, GF2Poly) else GF2Poly(v)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    return poly_matrix([[0] * n for _ in range(m)]) if m else np.empty((0, n), dtype=object)


def identity(n: int) -> np.ndarray:
    return poly_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    m, k = A.shape
    k2, n = B.shape
    if k != k2:
        raise ValueError("shape mismatch {} x {}".format(A.shape, B.shape))
    out = zeros(m, n)
    for i in range(m):
        for j in range(n):
            acc = 0
            for t in range(k):
                acc ^= (A[i, t] * B[t, j]).bits
            out[i, j] = GF2Poly(acc)
    return out


def matvec(A: np.ndarray, v) -> List[GF2Poly]:
    col = poly_matrix([[x] for x in v]) if len(v) else np.empty((0, 1), dtype=object)
    return [x for x in matmul(A, col)[:, 0]] if A.shape[0] else []


def determinant(A: np.ndarray) -> GF2Poly:
    """Cofactor expansion; only meant for the small matrices used in checks."""
    n = A.shape[0]
    if n == 0:
        return ONE_POLY
    if n == 1:
        return A[0, 0]
    acc = ZERO_POLY
    for j in range(n):
        if A[0, j].is_zero():
            continue
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        acc = acc + A[0, j] * determinant(minor)
    return acc
