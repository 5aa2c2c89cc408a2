"""Fast float evaluation of fixed lists of expressions."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .. import kernels
from .trig import ANGLES, CARTESIAN, COS, TrigExpr


class CompiledExprs:
    """Term tables for evaluating several expressions at many points.

    Parameters
    ----------
    exprs : sequence of TrigExpr
        Expressions to evaluate together; the output has one slot each.
    variables : sequence of str
        Order of the coordinates in the point arrays passed to ``__call__``.
    params : mapping, optional
        Numeric values for any symbolic s1, s2, s3 in the coefficients.
    """

    def __init__(self, exprs: Sequence[TrigExpr], variables: Sequence[str], params: Mapping | None = None):
        self.variables = tuple(variables)
        self.nout = len(exprs)
        cart = [v for v in self.variables if v in CARTESIAN]
        angs = [v for v in self.variables if v in ANGLES]
        used = set()
        for e in exprs:
            used.update(e.variables())
        missing = used - set(self.variables)
        if missing:
            raise ValueError(f"expressions use variables outside the chart: {sorted(missing)}")
        self._cart_pos = np.array([self.variables.index(v) for v in cart], dtype=np.int64)
        self._ang_pos = np.array([self.variables.index(v) for v in angs], dtype=np.int64)
        ci = [CARTESIAN.index(v) for v in cart]
        ai = [ANGLES.index(v) for v in angs]
        coef, mono, freq, kind, slot = [], [], [], [], []
        for k, e in enumerate(exprs):
            for (m, f, kd), c in e.terms.items():
                coef.append(c.evaluate(params or {}))
                mono.append([m[i] for i in ci])
                freq.append([f[i] for i in ai])
                kind.append(0 if kd == COS else 1)
                slot.append(k)
        self.coef = np.ascontiguousarray(coef, dtype=np.float64)
        self.mono = np.ascontiguousarray(np.array(mono, dtype=np.int64).reshape(len(coef), len(ci)))
        self.freq = np.ascontiguousarray(np.array(freq, dtype=np.int64).reshape(len(coef), len(ai)))
        self.kind = np.ascontiguousarray(kind, dtype=np.int64)
        self.slot = np.ascontiguousarray(slot, dtype=np.int64)

    def __call__(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=np.float64)
        xs = np.ascontiguousarray(p[self._cart_pos])
        an = np.ascontiguousarray(p[self._ang_pos])
        return kernels.trig_eval(self.coef, self.mono, self.freq, self.kind, xs, an, self.slot, self.nout)

    def many(self, points) -> np.ndarray:
        return np.array([self(p) for p in np.asarray(points, dtype=np.float64)])
