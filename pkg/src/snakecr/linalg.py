"""Exact linear algebra over ParamField (dense, small systems)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .symexpr import ParamField

_ZERO = ParamField(0)
_ONE = ParamField(1)


def rref(rows: Sequence[Sequence[ParamField]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if not mat[i][c].is_zero():
                # prefer constant pivots: cheaper arithmetic
                if piv is None or (mat[i][c].is_constant() and not mat[piv][c].is_constant()):
                    piv = i
                    if mat[i][c].is_constant():
                        break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = _ONE / mat[r][c]
        mat[r] = [x * inv if not x.is_zero() else x for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [a - f * b if not b.is_zero() else a for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence[ParamField]], ncols: int) -> list[list[ParamField]]:
    """Basis of {v : rows . v = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = _ZERO
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def identity(n: int):
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def as_fraction_matrix(a) -> list[list[Fraction]]:
    return [[x.as_fraction() for x in row] for row in a]
