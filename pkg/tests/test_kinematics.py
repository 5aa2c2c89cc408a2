import csv

import numpy as np
import pytest

from snakecr.exterior import VectorField
from snakecr.kinematics import (
    ControlSignal,
    KinematicsError,
    commutator_flow_test,
    drift_report,
    flow_commutator,
    integrate_controls,
    write_csv,
)
from snakecr.snake_model import M_CHART, SnakeParams, build_model
from snakecr.symexpr import parse

MODEL = build_model(SnakeParams("1", "1/2", "1"))
Q0 = np.array([0.3, -0.2, 0.7, 1.1, 2.3])


def test_zero_control_is_stationary():
    tr = integrate_controls(MODEL, Q0, ControlSignal.constant(0, 0, 1.0, 0.1))
    assert np.all(tr.q == Q0)
    assert tr.halted is None


def test_straight_configuration_moves_in_a_line():
    q0 = [0.0, 0.0, 0.5, 0.0, 0.0]
    tr = integrate_controls(MODEL, q0, ControlSignal.constant(0, 1, 2.0, 0.05))
    end = tr.q[-1]
    assert end[:2] == pytest.approx([2 * np.cos(0.5), 2 * np.sin(0.5)], abs=1e-12)
    assert end[2:] == pytest.approx([0.5, 0.0, 0.0], abs=1e-12)


def test_fourth_order_convergence():
    def end(dt):
        return integrate_controls(MODEL, Q0, ControlSignal.constant(0.7, -0.4, 1.0, dt)).q[-1]

    ref = end(1e-3)
    e1 = np.linalg.norm(end(0.1) - ref)
    e2 = np.linalg.norm(end(0.05) - ref)
    assert 12 < e1 / e2 < 20


def test_drift_stays_small():
    tr = integrate_controls(MODEL, Q0, ControlSignal.constant(0.7, -0.4, 2.0, 0.01))
    rep = drift_report(tr)
    assert rep["constraint_drift_max"] < 1e-12
    assert rep["pfaffian_drift_max"] < 1e-12
    assert rep["steps"] == 201


def test_planar_motion_equivariance():
    a = 0.9
    R = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
    shift = np.array([1.5, -0.25])
    u = ControlSignal.constant(0.5, 1.0, 1.0, 0.02)
    q1 = Q0.copy()
    q1[:2] = R @ Q0[:2] + shift
    q1[2] += a
    t0 = integrate_controls(MODEL, Q0, u).q[-1]
    t1 = integrate_controls(MODEL, q1, u).q[-1]
    assert t1[:2] == pytest.approx(R @ t0[:2] + shift, abs=1e-10)
    assert t1[2:] == pytest.approx(t0[2:] + [a, 0, 0], abs=1e-10)


def test_corrupted_state_is_flagged():
    tr = integrate_controls(MODEL, Q0, ControlSignal.constant(1, 1, 0.5, 0.1))
    tr.ambient[2, 0] += 1e-3
    assert drift_report(tr)["constraint_drift_max"] > 1e-4


def test_controls_from_csv(tmp_path):
    path = tmp_path / "u.csv"
    path.write_text("t,u1,u2\n0,1,0\n0.5,0,1\n1.0,0,0\n")
    u = ControlSignal.from_csv(str(path), dt=0.1)
    assert u.T == 1.0
    assert list(u(0.2)) == [1, 0] and list(u(0.5)) == [0, 1] and list(u(0.99)) == [0, 1]
    tr = integrate_controls(MODEL, Q0, u)
    out = tmp_path / "traj.csv"
    write_csv(tr, str(out))
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["t", "x", "y", "theta", "phi", "psi", "constraint_drift", "pfaffian_drift"]
    assert len(rows) == 12


def test_bad_controls():
    with pytest.raises(KinematicsError):
        ControlSignal.constant(1, 1, 1.0, 0.0)
    with pytest.raises(KinematicsError):
        ControlSignal(np.array([0.0, 0.0]), np.zeros((2, 2)), 1.0, 0.1)
    with pytest.raises(KinematicsError):
        integrate_controls(MODEL, [0, 0, 0], ControlSignal.constant(1, 1, 1.0, 0.1))


def test_require_generic_halts_on_singular_frame():
    q0 = [0.0, 0.0, 0.0, 0.0, 0.0]
    u = ControlSignal.constant(0, 1, 1.0, 0.1)
    assert integrate_controls(MODEL, q0, u).halted is None
    halted = integrate_controls(MODEL, q0, u, require_generic=True).halted
    assert halted and "determinant" in halted


def test_commutator_flows():
    t = commutator_flow_test(MODEL, Q0)
    assert abs(t.slope - 2) < 0.05 and t.angle < 1e-2
    t2 = commutator_flow_test(MODEL, Q0, pair=("xi5", "xi3"), reference="xi2")
    assert abs(t2.slope - 2) < 0.05 and t2.angle < 5e-2


def test_commuting_fields_have_no_displacement():
    X = VectorField.from_dict(M_CHART, {"x": parse("1")})
    Y = VectorField.from_dict(M_CHART, {"y": parse("1")})
    assert np.allclose(flow_commutator(X, Y, Q0, 0.1), 0, atol=1e-15)

