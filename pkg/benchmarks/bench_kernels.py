"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

The end-to-end timing runs one point normalization per backend; the numpy
run happens in a subprocess with SNAKECR_PURE_PYTHON=1 so the backend is
chosen at import as in normal use.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from snakecr import _kernels_fallback as fallback
from snakecr import kernels
from snakecr.jets import jet_space

NORMALIZE = """
import time, numpy as np
from snakecr import cr_structure as cr, equivalence as eq, kernels
from snakecr.snake_model import M_CHART, SnakeParams, build_model
m = build_model(SnakeParams("1", "1/2", "1"))
c, _ = cr.adapted_coframe(m, n_points=1)
p = M_CHART.sample(np.random.default_rng(0), 1)
t = time.perf_counter()
eq.normalize_coframe(c, m.params.floats(), p)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def bench_jet_mul(repeat):
    S = jet_space(5, 6)
    rng = np.random.default_rng(0)
    a = rng.normal(size=S.size) + 1j * rng.normal(size=S.size)
    b = rng.normal(size=S.size) + 1j * rng.normal(size=S.size)
    args = (a, b, S.ia, S.ib, S.ic, S.size)
    out = {"numpy": min(timeit.repeat(lambda: fallback.jet_mul(*args), number=200, repeat=repeat)) / 200}
    if kernels.compiled is not None:
        out["compiled"] = min(timeit.repeat(lambda: kernels.compiled.jet_mul(*args), number=200, repeat=repeat)) / 200
    return out


def bench_trig_eval(repeat):
    rng = np.random.default_rng(1)
    n, nc, na = 400, 2, 3
    args = (
        rng.normal(size=n),
        rng.integers(0, 3, size=(n, nc)).astype(np.int64),
        rng.integers(-2, 3, size=(n, na)).astype(np.int64),
        rng.integers(0, 2, size=n).astype(np.int64),
        rng.normal(size=nc),
        rng.uniform(0, 6, size=na),
        rng.integers(0, 25, size=n).astype(np.int64),
        25,
    )
    out = {"numpy": min(timeit.repeat(lambda: fallback.trig_eval(*args), number=500, repeat=repeat)) / 500}
    if kernels.compiled is not None:
        out["compiled"] = min(timeit.repeat(lambda: kernels.compiled.trig_eval(*args), number=500, repeat=repeat)) / 500
    return out


def bench_normalize():
    out = {}
    for pure in ("", "1"):
        env = dict(os.environ, SNAKECR_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", NORMALIZE], env=env, capture_output=True, text=True, check=True)
        name, secs = res.stdout.split()
        out[name] = float(secs)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    rows = [
        ("jet_mul (5 vars, order 6)", bench_jet_mul(a.repeat)),
        ("trig_eval (400 terms)", bench_trig_eval(a.repeat)),
        ("normalize one point", bench_normalize()),
    ]
    print(f"{'kernel':28s} {'numpy':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, r in rows:
        c = r.get("compiled")
        sp = f"{r['numpy'] / c:8.1f}" if c else "     n/a"
        cs = f"{c:12.3e}" if c else "         n/a"
        print(f"{name:28s} {r['numpy']:12.3e} {cs} {sp}")


if __name__ == "__main__":
    main()
