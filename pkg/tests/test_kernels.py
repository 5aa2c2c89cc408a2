import os
import subprocess
import sys

import numpy as np
import pytest

from snakecr import kernels
from snakecr._kernels_fallback import jet_mul as np_jet_mul
from snakecr._kernels_fallback import trig_eval as np_trig_eval
from snakecr.jets import jet_space

compiled = pytest.mark.skipif(kernels.compiled is None, reason="extension not built")


@compiled
def test_jet_mul_backends_agree(rng):
    S = jet_space(3, 4)
    a = rng.normal(size=S.size) + 1j * rng.normal(size=S.size)
    b = rng.normal(size=S.size) + 1j * rng.normal(size=S.size)
    ref = np_jet_mul(a, b, S.ia, S.ib, S.ic, S.size)
    out = kernels.compiled.jet_mul(a, b, S.ia, S.ib, S.ic, S.size)
    assert np.allclose(out, ref, rtol=1e-13, atol=1e-13)


@compiled
def test_trig_eval_backends_agree(rng):
    n, nc, na, nout = 40, 2, 3, 5
    args = (
        rng.normal(size=n),
        rng.integers(0, 3, size=(n, nc)).astype(np.int64),
        rng.integers(-2, 3, size=(n, na)).astype(np.int64),
        rng.integers(0, 2, size=n).astype(np.int64),
        rng.normal(size=nc),
        rng.uniform(0, 6, size=na),
        rng.integers(0, nout, size=n).astype(np.int64),
        nout,
    )
    assert np.allclose(kernels.compiled.trig_eval(*args), np_trig_eval(*args), rtol=1e-12, atol=1e-12)


def test_trig_eval_empty_input():
    z = np.zeros((0, 1), dtype=np.int64)
    out = kernels.trig_eval(np.zeros(0), z, z, np.zeros(0, dtype=np.int64), np.zeros(1), np.zeros(1),
                            np.zeros(0, dtype=np.int64), 3)
    assert out.tolist() == [0.0, 0.0, 0.0]


def test_environment_forces_pure_python():
    env = dict(os.environ, SNAKECR_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import snakecr.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
