import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from snakecr.jets import JetEvaluator, jet_space
from snakecr.symexpr import parse

S = jet_space(2, 4)
X0, T0 = 0.3, 0.8
xs, ts = sp.symbols("x theta")


def taylor(expr) -> np.ndarray:
    """Reference Taylor coefficients in the jet monomial order."""
    out = np.zeros(S.size, dtype=complex)
    for i, (a, b) in enumerate(S.mons):
        d = sp.diff(expr, xs, a, ts, b) if a or b else expr
        out[i] = complex(d.subs({xs: X0, ts: T0})) / (math.factorial(a) * math.factorial(b))
    return out


def ev():
    return JetEvaluator(S, ("x", "theta"), [X0, T0], {"s1": 1.5})


@pytest.mark.parametrize("text, ref", [
    ("x^2*sin(theta)", xs**2 * sp.sin(ts)),
    ("s1*cos(2*theta) - x", 1.5 * sp.cos(2 * ts) - xs),
    ("x^3*cos(theta)^2", xs**3 * sp.cos(ts) ** 2),
])
def test_evaluator_matches_sympy_taylor(text, ref):
    assert np.allclose(ev()(parse(text)), taylor(ref), atol=1e-12)


def test_recip_and_sincos():
    e = ev()
    a = e(parse("2 + x*sin(theta)"))
    assert np.allclose(S.recip(a), taylor(1 / (2 + xs * sp.sin(ts))), atol=1e-12)
    s, c = S.sincos(e(parse("x*cos(theta)")))
    assert np.allclose(s, taylor(sp.sin(xs * sp.cos(ts))), atol=1e-12)
    assert np.allclose(c, taylor(sp.cos(xs * sp.cos(ts))), atol=1e-12)


def test_recip_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        S.recip(S.var(0, 0.0))


def test_derivative_lowers_order():
    e = ev()
    f = e(parse("x^2*sin(theta)"))
    ref = taylor(sp.diff(xs**2 * sp.sin(ts), ts))
    low = S.deg <= S.K - 1
    assert np.allclose(S.d(f, 1)[low], ref[low], atol=1e-12)


coeffs = st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                  min_size=S.size, max_size=S.size).map(np.array)


@given(coeffs, coeffs, coeffs)
def test_product_is_associative_and_commutative(a, b, c):
    assert np.allclose(S.mul(a, b), S.mul(b, a))
    assert np.allclose(S.mul(S.mul(a, b), c), S.mul(a, S.mul(b, c)), atol=1e-9)


def test_matrix_inverse(rng):
    n = 3
    A = rng.normal(size=(n, n, S.size)) + 1j * rng.normal(size=(n, n, S.size))
    A[:, :, 0] += 3 * np.eye(n)
    P = S.matmul(A, S.inv(A))
    for i in range(n):
        for j in range(n):
            assert np.allclose(P[i, j], S.const(float(i == j)), atol=1e-9)


def test_bracket_of_coordinate_fields():
    e = ev()
    X = np.array([S.const(1.0), S.const(0.0)])
    Y = np.array([S.const(0.0), e(parse("x"))])
    B = S.bracket(X, Y)
    assert np.allclose(B[1], S.const(1.0), atol=1e-12)
    assert np.allclose(B[0], 0)
