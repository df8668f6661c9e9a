"""Exact integer lattice routines on tuples of Python ints.

Vectors are tuples, matrices are lists of row tuples. Lattices are stored
by an echelon basis (rows) with positive pivots, reduced above each pivot,
which makes both membership and coset representatives canonical.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Vec = tuple[int, ...]


def echelon(rows: Sequence[Sequence[int]], dim: int | None = None) -> list[Vec]:
    """Hermite-style row echelon basis of the lattice spanned by ``rows``."""
    rows = [list(map(int, r)) for r in rows]
    if dim is None:
        dim = len(rows[0]) if rows else 0
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        while len([r for r in rows if r[col] != 0]) > 1:
            nz = sorted((r for r in rows if r[col] != 0), key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(dim):
                    r[j] -= q * piv[j]
            rows = [r for r in rows if any(r)]
        piv = next(r for r in rows if r[col] != 0)
        rows = [r for r in rows if r is not piv]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        col += 1
    # reduce entries above pivots into [0, pivot)
    for i, row in enumerate(basis):
        p = _pivot(row)
        for k in range(i):
            q = basis[k][p] // row[p]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], row)]
    return [tuple(r) for r in basis]


def _pivot(row) -> int:
    return next(j for j, x in enumerate(row) if x != 0)


def reduce_mod(v: Sequence[int], basis: Sequence[Vec]) -> Vec:
    """Canonical representative of ``v`` modulo the lattice with echelon ``basis``."""
    v = list(v)
    for row in basis:
        p = _pivot(row)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def contains(basis: Sequence[Vec], v: Sequence[int]) -> bool:
    return not any(reduce_mod(v, basis))


def same_lattice(a: Sequence[Vec], b: Sequence[Vec]) -> bool:
    return list(a) == list(b)


def is_sublattice(small: Sequence[Vec], big: Sequence[Vec]) -> bool:
    return all(contains(big, v) for v in small)


def index_in_full(basis: Sequence[Vec], dim: int) -> int | None:
    """``[Z^dim : L]``, or None when the lattice has lower rank."""
    if len(basis) < dim:
        return None
    out = 1
    for row in basis:
        out *= row[_pivot(row)]
    return out


def integer_kernel(matrix: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of ``{x in Z^ncols : matrix x = 0}``; rational entries are allowed."""
    rows = [_clear_denominators(r) for r in matrix]
    # column operations on [M; I] via row operations on its transpose
    aug = [[rows[i][j] for i in range(len(rows))] + [1 if k == j else 0 for k in range(ncols)]
           for j in range(ncols)]
    m = len(rows)
    col = 0
    done = 0
    while col < m:
        active = aug[done:]
        nz = [r for r in active if r[col] != 0]
        if not nz:
            col += 1
            continue
        while len([r for r in active if r[col] != 0]) > 1:
            nz = sorted((r for r in active if r[col] != 0), key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(len(r)):
                    r[j] -= q * piv[j]
        piv = next(r for r in active if r[col] != 0)
        i = aug.index(piv, done)
        aug[done], aug[i] = aug[i], aug[done]
        done += 1
        col += 1
    kernel = [tuple(r[m:]) for r in aug[done:] if not any(r[:m])]
    return echelon(kernel, ncols) if kernel else []


def _clear_denominators(row) -> list[int]:
    fr = [Fraction(x) for x in row]
    d = lcm(*(f.denominator for f in fr)) if fr else 1
    return [int(f * d) for f in fr]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[tuple]:
    cols = list(zip(*b))
    return [tuple(sum(x * y for x, y in zip(row, c)) for c in cols) for row in a]


def left_inverse(columns: Sequence[Vec]) -> list[tuple[Fraction, ...]]:
    """Rational left inverse of the matrix whose columns are ``columns``.

    Raises ValueError when the columns are linearly dependent.
    """
    k = len(columns)
    if k == 0:
        return []
    n = len(columns[0])
    a = [[Fraction(columns[j][i]) for j in range(k)] for i in range(n)]
    # solve (A^T A) X = A^T
    ata = [[sum(a[r][i] * a[r][j] for r in range(n)) for j in range(k)] for i in range(k)]
    at = [[a[r][i] for r in range(n)] for i in range(k)]
    inv = _invert(ata)
    return [tuple(x) for x in mat_mul(inv, at)]


def _invert(m):
    k = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(m)]
    for c in range(k):
        p = next((r for r in range(c, k) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(k):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[k:] for row in a]


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    k = len(a)
    det = Fraction(1)
    for c in range(k):
        p = next((r for r in range(c, k) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, k):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det
