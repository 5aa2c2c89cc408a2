import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakecr.symexpr import (
    ParamField,
    ParseError,
    RationalPoint,
    TrigExpr,
    eval_exact,
    eval_numeric,
    eval_tree,
    parse,
    parse_param,
    parse_tree,
    to_string,
    unit_from_tangent,
)
from snakecr.symexpr.numeric import CompiledExprs

VARS = ("x", "y", "theta", "phi", "psi")
POINT = {"x": 0.3, "y": -0.7, "theta": 1.1, "phi": -0.4, "psi": 2.2}

atoms = st.one_of(
    st.integers(-3, 3).map(str),
    st.sampled_from(["x", "y", "1/2", "s1", "s2"]),
    st.tuples(st.sampled_from(["sin", "cos"]), st.sampled_from(["theta", "phi", "psi", "theta - phi", "2*psi"])).map(
        lambda t: f"{t[0]}({t[1]})"
    ),
)


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(children, st.integers(2, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
    )


expr_text = st.recursive(atoms, _combine, max_leaves=8)
PARAMS = {"s1": 1.3, "s2": 0.5, "s3": 0.8}


@given(expr_text)
def test_canonical_form_agrees_with_raw_tree(text):
    e = parse(text)
    raw = eval_tree(parse_tree(text), {**POINT, **PARAMS})
    assert eval_numeric(e, POINT, PARAMS) == pytest.approx(raw, rel=1e-9, abs=1e-9)


@given(expr_text)
def test_print_parse_roundtrip(text):
    e = parse(text)
    assert parse(to_string(e)) == e


@given(expr_text, st.sampled_from(VARS))
def test_derivative_matches_central_difference(text, v):
    e = parse(text)
    h = 1e-6
    up, dn = dict(POINT), dict(POINT)
    up[v] += h
    dn[v] -= h
    fd = (eval_numeric(e, up, PARAMS) - eval_numeric(e, dn, PARAMS)) / (2 * h)
    assert eval_numeric(e.diff(v), POINT, PARAMS) == pytest.approx(fd, rel=1e-5, abs=1e-5)


def test_pythagorean_identity_is_structurally_zero():
    assert parse("sin(theta - phi)^2 + cos(theta - phi)^2 - 1").is_zero()
    assert parse("sin(2*psi) - 2*sin(psi)*cos(psi)").is_zero()
    assert not parse("sin(psi)^2").is_zero()


def test_sign_canonicalisation():
    assert parse("sin(-psi)") == parse("-sin(psi)")
    assert parse("cos(phi - theta)") == parse("cos(theta - phi)")


def test_parameter_field_is_exact():
    s1 = ParamField.symbol("s1")
    q = (s1 + 1) / (s1 - 1)
    assert q * (s1 - 1) == s1 + 1
    assert parse_param("1/2") == Fraction(1, 2)
    assert (q.substitute({"s1": Fraction(3)})) == Fraction(2)
    assert q.evaluate({"s1": 3.0}) == pytest.approx(2.0)
    with pytest.raises(ZeroDivisionError):
        q / (s1 - s1)


def test_parameter_expression_rejects_coordinates():
    with pytest.raises(ParseError):
        parse_param("x + 1")


@pytest.mark.parametrize("bad", ["sin(theta", "x +", "cos(x)", "sin(theta*phi)", "x^-1", "q"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=20))
def test_rational_unit_vectors(t):
    c, s = unit_from_tangent(t)
    assert c * c + s * s == 1


@given(expr_text)
def test_exact_evaluation_matches_float(text):
    e = parse(text).specialize({"s1": Fraction(13, 10), "s2": Fraction(1, 2)})
    rp = RationalPoint({"x": Fraction(3, 10), "y": Fraction(-7, 10)},
                       {"theta": Fraction(1, 3), "phi": Fraction(-2, 5), "psi": Fraction(4)})
    exact = eval_exact(e, rp)
    assert isinstance(exact, Fraction)
    assert float(exact) == pytest.approx(eval_numeric(e, rp.float_point()), rel=1e-9, abs=1e-9)


def test_compiled_evaluation_matches_scalar(rng):
    exprs = [parse("x*cos(theta - phi) + s3"), parse("sin(2*psi)*y^2"), TrigExpr.const(ParamField(7))]
    names = ("x", "y", "theta", "phi", "psi")
    ce = CompiledExprs(exprs, names, {"s3": 0.25})
    pts = rng.uniform(-2, 2, size=(30, 5))
    vals = ce.many(pts)
    for p, row in zip(pts, vals):
        pd = dict(zip(names, p))
        assert row == pytest.approx([eval_numeric(e, pd, {"s3": 0.25}) for e in exprs])


def test_compiled_rejects_foreign_variables():
    with pytest.raises(ValueError):
        CompiledExprs([parse("z")], ("x",))


def test_trig_constructors():
    assert TrigExpr.sin(theta=1) == parse("sin(theta)")
    assert TrigExpr.var("x").scale(ParamField(2)) == parse("2*x")
    assert math.isclose(eval_numeric(TrigExpr.cos(psi=2), {"psi": 0.3}), math.cos(0.6))
