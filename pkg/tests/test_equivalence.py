from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakecr import cr_structure as cr
from snakecr import equivalence as eq
from snakecr.exterior import VectorField
from snakecr.snake_model import M_CHART, SnakeParams, build_model
from snakecr.symexpr import parse

MODEL = build_model(SnakeParams("1", "1/2", "1"))
PARAMS = MODEL.params.floats()
dyadic = st.integers(-8, 8).map(lambda k: k / 4)
gparam = st.tuples(dyadic, dyadic).map(lambda t: complex(*t))


@pytest.fixture(scope="module")
def coframe():
    return cr.adapted_coframe(MODEL)[0]


@pytest.fixture(scope="module")
def points():
    return M_CHART.sample(np.random.default_rng(3), 3)


@pytest.fixture(scope="module")
def snake(coframe, points):
    return eq.normalize_coframe(coframe, PARAMS, points)


@pytest.fixture(scope="module")
def deformed(coframe, points):
    return eq.normalize_coframe(coframe, PARAMS, points, deformation=0.3)


# -- structure group ---------------------------------------------------------

@pytest.mark.parametrize("pattern", eq.H_PATTERNS)
@pytest.mark.parametrize("subgroup", [False, True])
def test_group_patterns_close(pattern, subgroup):
    assert eq.pattern_closed(pattern, subgroup)


unit_g1 = gparam.filter(lambda g: 1 <= abs(g) <= 2)


@given(unit_g1, st.lists(gparam, min_size=4, max_size=4), unit_g1, st.lists(gparam, min_size=4, max_size=4))
def test_group_product_and_inverse(a1, arest, b1, brest):
    a, b = eq.HGroupElement(a1, *arest), eq.HGroupElement(b1, *brest)
    assert np.allclose((a @ b).matrix(), a.matrix() @ b.matrix())
    assert np.allclose((a @ a.inverse()).matrix(), np.eye(5), atol=1e-9)


def test_subgroup_embeds():
    h = eq.HJGroupElement(1.5 + 0.5j, 0.25 - 1j)
    assert np.allclose(h.as_h().matrix(), h.matrix())


def test_group_rejects():
    with pytest.raises(eq.EquivalenceError):
        eq.HGroupElement(0)
    with pytest.raises(eq.EquivalenceError):
        eq.HGroupElement.from_matrix(np.arange(25.0).reshape(5, 5) + np.eye(5))


def test_action_identity_and_composition(coframe):
    assert eq.h_action(eq.HGroupElement(), coframe).forms == coframe.forms
    a = eq.HGroupElement(1 + 0.5j, 0.5, -0.25j, 1.0, 0.5 + 0.5j)
    b = eq.HGroupElement(-0.5 + 1j, 0.25j, 0.5, -0.75, 0.25)
    lhs = eq.h_action(a, eq.h_action(b, coframe))
    assert lhs.forms == eq.h_action(a @ b, coframe).forms


def test_action_keeps_reality(coframe):
    c = eq.h_action(eq.HGroupElement(0.5 - 1j, 1j, 0.25, -1.0, 0.5), coframe).forms
    assert c[1] == c[0].conjugate() and c[4] == c[3].conjugate() and c[2].im.is_zero()


# -- nilpotent symbol --------------------------------------------------------

def test_symbol_matches_model_algebra():
    qs = eq.rational_points(M_CHART, 6, seed=1)
    hits = 0
    for q in qs:
        try:
            s = eq.model_symbol(MODEL, q)
        except eq.EquivalenceError:
            continue  # singular locus
        assert s.matches
        hits += 1
    assert hits >= 4


def test_symbol_of_rescaled_generators():
    q = eq.rational_points(M_CHART, 1, seed=2)[0]
    s = eq.model_symbol(MODEL, q, scale=(2, -3))
    assert s.matches
    assert all(isinstance(x, Fraction) for row in s.change_of_basis for x in row)


def test_symbol_rejects_wrong_growth():
    X = VectorField.from_dict(M_CHART, {"x": parse("1")})
    Y = VectorField.from_dict(M_CHART, {"y": parse("1"), "theta": parse("x")})
    with pytest.raises(eq.EquivalenceError, match=r"\(2,3,5\)"):
        eq.nilpotent_symbol((X, Y), eq.rational_points(M_CHART, 1)[0])


# -- normalization -------------------------------------------------------------

def test_fit_residual_and_pattern(snake):
    inv = snake.invariants
    assert inv.residual < 1e-9
    pat = inv.pattern()
    assert all(pat[n] == "vanishing" for n in eq.VANISHING)
    assert inv.max_abs("T") == pytest.approx(1.0)
    assert inv.max_imag_T() < 1e-9


def test_gauge_invariant_combination_vanishes(coframe, points):
    # S + conj(F)/2 does not depend on the remaining connection freedom
    for g in eq.GAUGES:
        v = eq.normalize_coframe(coframe, PARAMS, points[:1], gauge=g).invariants.values
        assert np.max(np.abs(v["S"] + np.conj(v["F"]) / 2)) < 1e-8


def test_absorb_gauges(coframe, points):
    s = eq.normalize_coframe(coframe, PARAMS, points[:1], gauge="absorb_S").invariants
    f = eq.normalize_coframe(coframe, PARAMS, points[:1], gauge="absorb_F").invariants
    assert s.max_abs("S") < 1e-12
    assert f.max_abs("F") < 1e-12


def test_moduli_invariant_under_group_change(coframe, points, snake):
    h0 = eq.HGroupElement(1.5 - 0.5j, 0.25 + 0.5j, -0.75j, 0.5, 1 + 0.25j)
    other = eq.normalize_coframe(eq.h_action(h0, coframe), PARAMS, points).invariants
    for n in eq.INVARIANT_NAMES:
        assert np.allclose(np.abs(other.values[n]), np.abs(snake.invariants.values[n]), atol=1e-8)


def test_structure_respects_conjugation(snake):
    C = snake.points[0].jets["C"]
    conj = (1, 0, 2, 4, 3)
    for i in range(5):
        for j in range(5):
            for k in range(5):
                assert abs(C[conj[i]][conj[j], conj[k]][0] - np.conj(C[i][j, k][0])) < 1e-8


def test_normal_form_is_d_closed(snake, deformed):
    assert eq.d_squared_residual(snake) < 1e-8
    assert eq.d_squared_residual(deformed) < 1e-8


def test_dJ_relation_and_negative_control(snake):
    d = eq.check_dJ_relation(snake)
    assert d.ok and d.implied_N < 1e-6 and d.implied_L < 1e-6
    assert not eq.check_dJ_relation(snake, inject_J=0.5).ok


def test_deformed_structure_has_J(deformed):
    assert deformed.invariants.residual < 1e-9
    assert deformed.invariants.max_abs("J") > 1e-2
    assert eq.check_dJ_relation(deformed).ok


def test_opposite_sign_convention_does_not_fit(coframe, points):
    r = eq.normalize_coframe(coframe, PARAMS, points[:2], deformation=0.3, jv_sign=-1)
    assert r.invariants.residual > 1e-3


def test_reduction_to_subgroup(snake, deformed):
    red = eq.reduce_to_HJ(snake)
    assert red.ok and red.max_g2 < 1e-8 and red.invariant_deviation < 1e-8
    with pytest.raises(eq.EquivalenceError):
        eq.reduce_to_HJ(deformed)


def test_scale_none_keeps_pattern(coframe, points):
    r = eq.normalize_coframe(coframe, PARAMS, points[:1], scale="none")
    assert r.invariants.scale == "none"
    assert r.invariants.max_abs("J") < 1e-6


def test_symbolic_mode_falls_back(coframe, points):
    with pytest.warns(RuntimeWarning):
        r = eq.normalize_coframe(coframe, PARAMS, points[:1], mode="symbolic")
    assert r.invariants.mode == "pointwise" and r.warnings


def test_bad_options(coframe, points):
    with pytest.raises(eq.EquivalenceError):
        eq.normalize_coframe(coframe, PARAMS, points[:1], mode="other")
    with pytest.raises(eq.EquivalenceError):
        eq.normalize_coframe(coframe, PARAMS, points[:1], scale="other")
    with pytest.raises(eq.EquivalenceError):
        eq.normalize_point(coframe.matrix_exprs(), PARAMS, points[0], order=4)
