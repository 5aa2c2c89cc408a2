"""Truncated multivariate Taylor jets with complex coefficients.

A jet of order K in n variables is the vector of Taylor coefficients of
all monomials of total degree <= K, ordered by degree.  Products are
truncated at order K; a derivative lowers the valid order by one, which
callers must budget for.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .symexpr import TrigExpr
from .symexpr.trig import ANGLES, CARTESIAN, COS


class JetSpace:
    def __init__(self, nvar: int, order: int):
        self.n = nvar
        self.K = order
        mons = []
        for deg in range(order + 1):
            mons += sorted((m for m in itertools.product(range(deg + 1), repeat=nvar) if sum(m) == deg), reverse=True)
        self.mons = mons
        self.idx = {m: i for i, m in enumerate(mons)}
        self.size = len(mons)
        self.deg = np.array([sum(m) for m in mons])
        ia, ib, ic = [], [], []
        for i, a in enumerate(mons):
            for j, b in enumerate(mons):
                if self.deg[i] + self.deg[j] <= order:
                    ia.append(i)
                    ib.append(j)
                    ic.append(self.idx[tuple(x + y for x, y in zip(a, b))])
        self.ia = np.ascontiguousarray(ia, dtype=np.int64)
        self.ib = np.ascontiguousarray(ib, dtype=np.int64)
        self.ic = np.ascontiguousarray(ic, dtype=np.int64)
        self.dsrc, self.ddst, self.dfac = [], [], []
        for v in range(nvar):
            src, dst, fac = [], [], []
            for i, m in enumerate(mons):
                if m[v] > 0:
                    mm = list(m)
                    mm[v] -= 1
                    src.append(i)
                    dst.append(self.idx[tuple(mm)])
                    fac.append(m[v])
            self.dsrc.append(np.array(src, dtype=np.int64))
            self.ddst.append(np.array(dst, dtype=np.int64))
            self.dfac.append(np.array(fac, dtype=float))
        self.first = [self.idx[tuple(1 if i == v else 0 for i in range(nvar))] for v in range(nvar)]

    # -- scalars ------------------------------------------------------------
    def const(self, c) -> np.ndarray:
        a = np.zeros(self.size, dtype=np.complex128)
        a[0] = c
        return a

    def var(self, v: int, value: float) -> np.ndarray:
        a = self.const(value)
        a[self.first[v]] = 1.0
        return a

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return kernels.jet_mul(
            np.ascontiguousarray(a, dtype=np.complex128),
            np.ascontiguousarray(b, dtype=np.complex128),
            self.ia,
            self.ib,
            self.ic,
            self.size,
        )

    def recip(self, a: np.ndarray) -> np.ndarray:
        a0 = a[0]
        if a0 == 0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        t = -a / a0
        t[0] = 0
        out = self.const(1.0)
        pw = self.const(1.0)
        for _ in range(self.K):
            pw = self.mul(pw, t)
            out = out + pw
        return out / a0

    def sincos(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """sin and cos of a real-valued jet."""
        a0 = a[0].real
        r = a.copy()
        r[0] = 0
        c = self.const(1.0)
        s = r.copy()
        pw = r.copy()
        for n in range(2, self.K + 1):
            pw = self.mul(pw, r) / n
            if n % 2 == 0:
                c = c + (-1) ** (n // 2) * pw
            else:
                s = s + (-1) ** (n // 2) * pw
        return np.sin(a0) * c + np.cos(a0) * s, np.cos(a0) * c - np.sin(a0) * s

    def d(self, a: np.ndarray, v: int) -> np.ndarray:
        out = np.zeros_like(a)
        out[..., self.ddst[v]] = a[..., self.dsrc[v]] * self.dfac[v]
        return out

    def gradient(self, a: np.ndarray) -> np.ndarray:
        """First partial derivatives at the expansion point."""
        return np.array([a[i] for i in self.first])

    # -- vectors and matrices -------------------------------------------------
    def dot(self, xs, ys) -> np.ndarray:
        acc = np.zeros(self.size, dtype=np.complex128)
        for x, y in zip(xs, ys):
            acc = acc + self.mul(x, y)
        return acc

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        n, m = A.shape[:2]
        k = B.shape[1]
        out = np.zeros((n, k, self.size), dtype=np.complex128)
        for i in range(n):
            for j in range(k):
                out[i, j] = self.dot(A[i], B[:, j])
        return out

    def inv(self, A: np.ndarray) -> np.ndarray:
        """Gauss-Jordan inverse pivoting on the constant terms."""
        n = A.shape[0]
        eye = np.array([[self.const(1.0 if i == j else 0.0) for j in range(n)] for i in range(n)])
        M = np.concatenate([A.astype(np.complex128), eye], axis=1)
        for c in range(n):
            piv = max(range(c, n), key=lambda r: abs(M[r, c, 0]))
            if abs(M[piv, c, 0]) == 0:
                raise np.linalg.LinAlgError("singular jet matrix")
            M[[c, piv]] = M[[piv, c]]
            rp = self.recip(M[c, c])
            M[c] = np.array([self.mul(rp, x) for x in M[c]])
            for r in range(n):
                if r != c and np.any(M[r, c]):
                    f = M[r, c].copy()
                    M[r] = M[r] - np.array([self.mul(f, x) for x in M[c]])
        return M[:, n:]

    def apply(self, X: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Directional derivative X(f) for a vector field given as (n, size)."""
        return self.dot(X, [self.d(f, v) for v in range(self.n)])

    def bracket(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        out = np.zeros((self.n, self.size), dtype=np.complex128)
        dX = [[self.d(X[i], j) for j in range(self.n)] for i in range(self.n)]
        dY = [[self.d(Y[i], j) for j in range(self.n)] for i in range(self.n)]
        for i in range(self.n):
            out[i] = self.dot(X, dY[i]) - self.dot(Y, dX[i])
        return out


@lru_cache(maxsize=8)
def jet_space(nvar: int, order: int) -> JetSpace:
    return JetSpace(nvar, order)


class JetEvaluator:
    """Evaluate TrigExprs as jets at a point of a chart.

    Parameters
    ----------
    S : JetSpace
    chart : sequence of str
        Variable names, one per jet variable.
    point : array_like
        Expansion point.
    params : mapping
        Numeric parameter values for coefficients.
    """

    def __init__(self, S: JetSpace, chart: Sequence[str], point, params: Mapping):
        self.S = S
        self.chart = tuple(chart)
        self.params = dict(params)
        self.vars = {n: S.var(i, float(point[i])) for i, n in enumerate(self.chart)}
        self._pow: dict = {}
        self._trig: dict = {}

    def _power(self, name, e):
        key = (name, e)
        if key not in self._pow:
            self._pow[key] = self.vars[name] if e == 1 else self.S.mul(self._power(name, e - 1), self.vars[name])
        return self._pow[key]

    def _sincos(self, freq):
        if freq not in self._trig:
            arg = self.S.const(0.0)
            for j, f in enumerate(freq):
                if f:
                    arg = arg + f * self.vars[ANGLES[j]]
            self._trig[freq] = self.S.sincos(arg)
        return self._trig[freq]

    def __call__(self, e: TrigExpr) -> np.ndarray:
        S = self.S
        out = S.const(0.0)
        for (mono, freq, kind), c in e.terms.items():
            coef = c.evaluate(self.params)
            if any(freq):
                s, co = self._sincos(freq)
                t = coef * (co if kind == COS else s)
            else:
                t = S.const(coef)
            for i, p in enumerate(mono):
                if p:
                    t = S.mul(t, self._power(CARTESIAN[i], p))
            out = out + t
        return out
