"""Pure numpy implementations of the hot kernels (reference backend)."""
from __future__ import annotations

import numpy as np


def jet_mul(a, b, ia, ib, ic, n):
    """Truncated product of two jets given the (ia, ib, ic) index triples."""
    out = np.zeros(n, dtype=np.complex128)
    np.add.at(out, ic, a[ia] * b[ib])
    return out


def trig_eval(coef, mono, freq, kind, xs, angs, slot, nout):
    """Sum of c * x^m * cos/sin(k . a) terms, accumulated into output slots."""
    out = np.zeros(nout, dtype=np.float64)
    if coef.shape[0] == 0:
        return out
    arg = freq @ angs
    trig = np.where(kind == 0, np.cos(arg), np.sin(arg))
    if mono.shape[1]:
        val = coef * np.prod(xs[None, :] ** mono, axis=1) * trig
    else:
        val = coef * trig
    np.add.at(out, slot, val)
    return out
