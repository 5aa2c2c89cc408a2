# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels; same signatures as the fallback."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def jet_mul(const double complex[::1] a, const double complex[::1] b,
            const long[::1] ia, const long[::1] ib, const long[::1] ic, Py_ssize_t n):
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t t, m = ia.shape[0]
    for t in range(m):
        o[ic[t]] += a[ia[t]] * b[ib[t]]
    return out


def trig_eval(const double[::1] coef, const long[:, ::1] mono, const long[:, ::1] freq,
              const long[::1] kind, const double[::1] xs, const double[::1] angs,
              const long[::1] slot, Py_ssize_t nout):
    out = np.zeros(nout, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t t, i, e, nt = coef.shape[0], nx = mono.shape[1], na = freq.shape[1]
    cdef double v, arg
    for t in range(nt):
        v = coef[t]
        for i in range(nx):
            for e in range(mono[t, i]):
                v *= xs[i]
        arg = 0.0
        for i in range(na):
            arg += freq[t, i] * angs[i]
        if kind[t] == 0:
            v *= cos(arg)
        else:
            v *= sin(arg)
        o[slot[t]] += v
    return out
