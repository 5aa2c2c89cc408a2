from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakecr.exterior import lie_bracket
from snakecr.snake_model import (
    M_CHART,
    ModelError,
    SnakeParams,
    build_model,
    check_growth,
    check_symmetries,
    constraint_residuals,
    discrepancy_report,
    frame_determinant,
    literal_model,
    non_skidding_residuals,
    pairing_table,
    span_coefficients,
)
from snakecr.symexpr import parse

MODEL = build_model(SnakeParams("1", "1/2", "1"))
positive = st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=12).filter(lambda q: q > 0)
unit = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20)


def test_symbolic_constraints_vanish():
    assert all(r.is_zero() for r in constraint_residuals(build_model(SnakeParams("s1", "1/2", "s3"))))


@given(positive, unit, positive)
def test_constraints_and_kernel_for_rational_parameters(s1, s2, s3):
    m = build_model(SnakeParams(s1, s2, s3))
    assert all(r.is_zero() for r in constraint_residuals(m))
    assert all(v.is_zero() for v in pairing_table(m).values())


def test_fully_symbolic_kernel():
    m = build_model(SnakeParams())
    assert all(v.is_zero() for v in pairing_table(m).values())
    assert all(v.is_zero() for v in non_skidding_residuals(m).values())


def test_numeric_embedding_satisfies_constraints(rng):
    for q in M_CHART.sample(rng, 10):
        a = MODEL.embed_numeric(q)
        x, y = a[:4], a[4:]
        d = np.hypot(np.diff(x), np.diff(y))
        assert d == pytest.approx([1.0, 1.0, 1.0])


def test_literal_transcription_failures():
    p = SnakeParams()
    bad = {k: v for k, v in literal_model(p).pairings().items() if not v.is_zero()}
    assert bad == {
        "Upsilon1(xi5)": parse("2*sin(phi)"),
        "Upsilon3(xi5)": parse("2*sin(psi)"),
        "Upsilon3(xi4)": parse("2*s3 - 2*(1 - s2)*cos(psi)"),
    }


def test_discrepancy_verdicts_are_sign_flips_only():
    p = SnakeParams("1", "1/2", "1")
    verdicts = discrepancy_report(build_model(p), literal_model(p)).verdicts()
    assert set(verdicts.values()) <= {"match", "sign-flip"}
    assert {k for k, v in verdicts.items() if v == "sign-flip"} == {"Upsilon3", "xi5", "xi3", "xi1"}


def test_frame_brackets():
    m = build_model(SnakeParams())
    assert lie_bracket(m.xi5, m.xi4) == m.xi3
    assert lie_bracket(m.xi5, m.xi3) == m.xi2
    assert lie_bracket(m.xi4, m.xi3) == m.xi1


def test_frame_determinant_at_half():
    assert frame_determinant(MODEL) == parse("1/4*sin(phi) + 1/4*sin(psi) - 1/8*sin(phi + psi)")


def test_growth():
    g = check_growth(build_model(SnakeParams()), n_points=50)
    assert g.symbolic == (2, 3, 5) and g.numeric_fraction >= 0.95


def test_symmetries_lie_in_distribution():
    assert check_symmetries(build_model(SnakeParams())).all_hold


def test_non_distribution_field_is_not_in_span():
    _, _, inside = span_coefficients(MODEL, MODEL.xi3)
    assert not inside


@pytest.mark.parametrize("args", [("0", "1/2", "1"), ("1", "1", "1"), ("1", "0", "1"), ("-1", "1/2", "1")])
def test_parameter_validation(args):
    with pytest.raises(ModelError):
        SnakeParams(*args)


def test_float_parameters_rejected():
    with pytest.raises(ModelError):
        SnakeParams(1.0, "1/2", "1")
