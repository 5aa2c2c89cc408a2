import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakecr.exterior import (
    Chart,
    ChartError,
    Distribution,
    KForm,
    VectorField,
    determinant,
    differential,
    ext_d,
    growth_vector,
    lie_bracket,
    numeric_rank,
    pair,
    symbolic_rank,
    wedge,
)
from snakecr.symexpr import eval_numeric, parse

CH = Chart(("x", "y", "theta", "phi"))
POINT = {"x": 0.4, "y": -0.9, "theta": 0.7, "phi": 2.1}

coeff = st.sampled_from([
    "0", "1", "x", "y^2", "sin(theta)", "x*cos(phi)", "cos(theta - phi)", "y*sin(2*phi)", "s1*x",
    "x*y - 1/2", "sin(phi)^2",
])
vfield = st.lists(coeff, min_size=4, max_size=4).map(
    lambda cs: VectorField.from_dict(CH, {n: parse(c) for n, c in zip(CH.names, cs)}))
oneform = st.lists(coeff, min_size=4, max_size=4).map(
    lambda cs: KForm.one_form(CH, {n: parse(c) for n, c in zip(CH.names, cs)}))


@given(oneform)
def test_d_squared_vanishes(a):
    assert ext_d(ext_d(a)).is_zero()


@given(coeff)
def test_d_squared_on_functions(f):
    assert ext_d(differential(CH, parse(f))).is_zero()


@given(vfield, vfield, vfield)
def test_jacobi_identity(X, Y, Z):
    j = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert j.is_zero()


@given(vfield, vfield)
def test_bracket_antisymmetric(X, Y):
    assert (lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero()


@given(oneform, vfield, vfield)
def test_invariant_formula_for_d(a, X, Y):
    # d a(X, Y) = X a(Y) - Y a(X) - a([X, Y])
    lhs = pair(ext_d(a), X, Y)
    rhs = X.apply(pair(a, Y)) - Y.apply(pair(a, X)) - pair(a, lie_bracket(X, Y))
    assert (lhs - rhs).is_zero()


@given(oneform, oneform)
def test_wedge_graded_commutative(a, b):
    assert (wedge(a, b) + wedge(b, a)).is_zero()
    assert wedge(a, a).is_zero()


@given(coeff, vfield)
def test_differential_pairs_to_directional_derivative(f, X):
    e = parse(f)
    assert (pair(differential(CH, e), X) - X.apply(e)).is_zero()


def test_determinant_matches_numpy(rng):
    texts = [["x", "cos(theta)", "1", "y"], ["sin(phi)", "x*y", "2", "0"],
             ["1", "y", "cos(theta - phi)", "x^2"], ["s2", "0", "sin(theta)", "1"]]
    rows = [[parse(t) for t in r] for r in texts]
    num = np.array([[eval_numeric(e, POINT, {"s2": 0.3}) for e in r] for r in rows])
    assert eval_numeric(determinant(rows), POINT, {"s2": 0.3}) == pytest.approx(np.linalg.det(num))


def test_symbolic_rank_detects_dependence():
    v1 = [parse("x"), parse("sin(theta)")]
    v2 = [parse("2*x"), parse("2*sin(theta)")]
    v3 = [parse("1"), parse("0")]
    rank, idx = symbolic_rank([v1, v2, v3])
    assert rank == 2 and idx == [0, 2]


def test_numeric_rank_threshold():
    m = np.diag([1.0, 1e-3, 1e-12])
    assert numeric_rank(m, 1e-8) == 2


def test_heisenberg_growth():
    ch = Chart(("x", "y", "z"))
    X = VectorField.from_dict(ch, {"x": parse("1")})
    Y = VectorField.from_dict(ch, {"y": parse("1"), "z": parse("x")})
    g = growth_vector(Distribution(ch, (X, Y)), n_points=20)
    assert g.symbolic == (2, 3)
    assert g.numeric_fraction == 1.0


def test_chart_errors():
    with pytest.raises(ChartError):
        Chart(("x", "x"))
    with pytest.raises(ChartError):
        Chart(("x", "w"))
    with pytest.raises(ChartError):
        VectorField.from_dict(Chart(("x",)), {"x": parse("y")})
    other = Chart(("x", "y"))
    with pytest.raises(ChartError):
        lie_bracket(VectorField.from_dict(CH, {"x": parse("1")}), VectorField.from_dict(other, {"x": parse("1")}))
