from fractions import Fraction

import numpy as np
import pytest

from snakecr import cr_structure as cr
from snakecr.snake_model import M_CHART, SnakeParams, build_model

MODEL = build_model(SnakeParams("1", "1/2", "1"))


def _identity():
    return cr.ComplexStructureMatrix([[int(i == j) for j in range(8)] for i in range(8)])


def test_verify_complex_structure():
    assert cr.verify_complex_structure(cr.REFERENCE_J)
    assert cr.verify_complex_structure(-cr.REFERENCE_J)
    assert cr.verify_complex_structure(cr.STANDARD_J)
    assert not cr.verify_complex_structure(_identity())


def test_shape_validation():
    with pytest.raises(cr.CRError):
        cr.ComplexStructureMatrix([[0] * 7] * 8)


@pytest.mark.parametrize("s", ["1/2", "2"])
def test_solver_finds_reference_pair(s):
    res = cr.solve_complex_structure(build_model(SnakeParams(s, "1/2", s)))
    assert res.status == "solutions"
    assert set(res.solutions) == {cr.REFERENCE_J, -cr.REFERENCE_J}


@pytest.mark.parametrize("s2", ["1/4", "2/3"])
def test_solver_empty_off_half(s2):
    assert cr.solve_complex_structure(build_model(SnakeParams("1", s2, "1"))).status == "empty"


def test_intersection_with_reference_is_distribution(rng):
    ev = cr.TangentEvaluator(MODEL)
    for q in M_CHART.sample(rng, 10):
        r = cr.cr_intersection(cr.REFERENCE_J, MODEL, q, ev)
        assert r.dimension == 2 and r.equals_distribution and r.projector_distance < 1e-8


def test_standard_structure_is_not_compatible():
    r = cr.cr_intersection(cr.STANDARD_J, MODEL, [0.1, 0.2, 0.3, 0.4, 0.5])
    assert not r.equals_distribution


def test_intersection_rejects_off_locus_points():
    class Shifted(cr.TangentEvaluator):
        def embed(self, p):
            a = super().embed(p)
            a[0] += 0.1
            return a

    with pytest.raises(cr.CRError):
        cr.cr_intersection(cr.REFERENCE_J, MODEL, [0.1, 0.2, 0.3, 0.4, 0.5], Shifted(MODEL))


def test_holomorphic_signs_are_mixed():
    # the listed coordinates are holomorphic, but z3 has the opposite orientation
    signs = cr.holomorphic_check(cr.REFERENCE_J)
    assert signs == {"z1": -1, "z2": -1, "z3": 1, "z4": -1}
    assert cr.global_orientation(signs) is None
    flipped = cr.holomorphic_check(-cr.REFERENCE_J)
    assert all(flipped[k] == -v for k, v in signs.items())


def test_holomorphic_check_rejects_non_holomorphic():
    with pytest.raises(cr.CRError):
        cr.holomorphic_check(cr.REFERENCE_J, {"w": ({"x1": 1}, {"y1": 1})})


def test_global_orientation():
    assert cr.global_orientation({"a": 1, "b": 1}) == 1
    assert cr.global_orientation({"a": 1, "b": -1}) is None


def test_beta_chart_roundtrip():
    bc = cr.beta_chart(MODEL)
    assert all(r.is_zero() for r in cr.beta_roundtrip_residuals(MODEL, bc).values())


def test_beta_chart_needs_half():
    with pytest.raises(cr.CRError):
        cr.beta_chart(build_model(SnakeParams("1", "1/3", "1")))


def test_eigenfields():
    e = cr.eigenfields(MODEL, cr.REFERENCE_J)
    assert cr.eigen_residual(cr.REFERENCE_J, e.plus, 1)
    assert cr.eigen_residual(cr.REFERENCE_J, e.minus, -1)
    assert not cr.eigen_residual(cr.REFERENCE_J, e.plus, -1)


def test_eigenfields_reject_incompatible_structure():
    with pytest.raises(cr.CRError):
        cr.eigenfields(MODEL, cr.STANDARD_J)


def test_adapted_coframe():
    c, mags = cr.adapted_coframe(MODEL, n_points=10)
    f = c.forms
    assert f[1] == f[0].conjugate() and f[4] == f[3].conjugate()
    assert f[2].im.is_zero()
    w = c.top_wedge()
    assert not (w.re.is_zero() and w.im.is_zero())
    assert np.min(mags) > 1e-6
    # the first three forms annihilate the distribution
    for form in f[:3]:
        for X in (MODEL.xi4, MODEL.xi5):
            re, im = form.pair(X)
            assert re.is_zero() and im.is_zero()


def test_reference_entries_exact():
    assert all(x.as_fraction().denominator == 1 for row in cr.REFERENCE_J.entries for x in row)
    assert cr.REFERENCE_J.entries[0][4] == Fraction(-1)


def test_conjugate_third_coordinate_has_common_orientation():
    s = cr.holomorphic_check(cr.REFERENCE_J, {"w": ({"x3": 1}, {"y3": -1})})
    assert s == {"w": -1}
