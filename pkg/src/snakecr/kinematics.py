"""Trajectory integration along the distribution and flow-based bracket checks."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exterior import VectorField
from .snake_model import AMBIENT_CHART, M_CHART, SnakeModel, frame_determinant
from .symexpr.numeric import CompiledExprs

STATE_NAMES = M_CHART.names


class KinematicsError(RuntimeError):
    pass


@dataclass
class ControlSignal:
    """Piecewise-constant controls (u1, u2) on [0, T].

    ``knots[i]`` is the start time of piece i, holding ``values[i]``.
    """

    knots: np.ndarray
    values: np.ndarray
    T: float
    dt: float

    def __post_init__(self):
        self.knots = np.asarray(self.knots, dtype=float)
        self.values = np.asarray(self.values, dtype=float).reshape(-1, 2)
        if self.dt <= 0:
            raise KinematicsError("dt must be positive")
        if self.T < 0 or len(self.knots) != len(self.values) or len(self.knots) == 0:
            raise KinematicsError("controls need matching knots and values and T >= 0")
        if np.any(np.diff(self.knots) <= 0):
            raise KinematicsError("knots must be strictly increasing")

    @classmethod
    def constant(cls, u1: float, u2: float, T: float, dt: float) -> "ControlSignal":
        return cls(np.array([0.0]), np.array([[u1, u2]]), T, dt)

    @classmethod
    def from_csv(cls, path: str, dt: float, T: float | None = None) -> "ControlSignal":
        """Read rows ``t, u1, u2``; a header line is skipped if present."""
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                if not rec or rec[0].strip().startswith("#"):
                    continue
                try:
                    rows.append([float(x) for x in rec[:3]])
                except ValueError:
                    if rows:
                        raise
        if not rows:
            raise KinematicsError(f"no control rows in {path}")
        a = np.array(rows)
        return cls(a[:, 0], a[:, 1:3], float(a[-1, 0]) if T is None else T, dt)

    def __call__(self, t: float) -> np.ndarray:
        i = int(np.searchsorted(self.knots, t + 1e-12, side="right")) - 1
        return self.values[max(i, 0)]


@dataclass
class Trajectory:
    t: np.ndarray
    q: np.ndarray
    ambient: np.ndarray
    constraint_drift: np.ndarray
    pfaffian_drift: np.ndarray
    halted: str | None = None
    checker: Callable | None = field(default=None, repr=False)


class _Evaluators:
    def __init__(self, m: SnakeModel):
        params = m.params.floats()
        self.vec = CompiledExprs(list(m.xi4.comps) + list(m.xi5.comps), STATE_NAMES, params)
        emb = [m.embedding[n] for n in AMBIENT_CHART.names]
        self.emb = CompiledExprs(emb, STATE_NAMES, params)
        self.jac = CompiledExprs([e.diff(n) for e in emb for n in STATE_NAMES], STATE_NAMES, params)
        self.h = CompiledExprs(list(m.constraints), AMBIENT_CHART.names, params)
        forms = [[u.coeff(n) for n in AMBIENT_CHART.names] for u in m.ambient_pfaffian]
        self.ups = CompiledExprs([c for row in forms for c in row], AMBIENT_CHART.names, params)
        self.det = CompiledExprs([frame_determinant(m)], STATE_NAMES, params)

    def velocity(self, q, u) -> np.ndarray:
        v = self.vec(q)
        return u[0] * v[:5] + u[1] * v[5:]

    def rank2_measure(self, q) -> float:
        v = self.vec(q).reshape(2, 5)
        return float(np.linalg.svd(v, compute_uv=False)[-1])

    def drifts(self, q, qdot) -> tuple[float, float, np.ndarray]:
        a = self.emb(q)
        adot = self.jac(q).reshape(8, 5) @ qdot
        h = float(np.max(np.abs(self.h(a))))
        ups = float(np.max(np.abs(self.ups(a).reshape(3, 8) @ adot)))
        return h, ups, a


def integrate_controls(
    m: SnakeModel, q0: Sequence[float], u: ControlSignal, require_generic: bool = False
) -> Trajectory:
    """Fixed-step RK4 for q' = u1 xi4(q) + u2 xi5(q) on the M chart.

    The control is frozen over each step at its value at the step start.
    The integrator halts with a diagnostic if xi4, xi5 become dependent,
    or, with ``require_generic``, if the 5-frame determinant drops below
    1e-10.
    """
    ev = _Evaluators(m)
    q = np.asarray(q0, dtype=float).copy()
    if q.shape != (5,):
        raise KinematicsError("q0 must have 5 coordinates (x, y, theta, phi, psi)")
    n = int(round(u.T / u.dt))
    ts, qs, amb, hd, pd = [], [], [], [], []
    halted = None
    t = 0.0
    for k in range(n + 1):
        t = k * u.dt
        uk = u(t)
        qdot = ev.velocity(q, uk)
        h, ups, a = ev.drifts(q, qdot)
        ts.append(t)
        qs.append(q.copy())
        amb.append(a)
        hd.append(h)
        pd.append(ups)
        if ev.rank2_measure(q) < 1e-10:
            halted = f"distribution degenerates at t={t:.6g}"
            break
        if require_generic and abs(ev.det(q)[0]) < 1e-10:
            halted = f"frame determinant below 1e-10 at t={t:.6g}"
            break
        if not np.all(np.isfinite(q)):
            halted = f"non-finite state at t={t:.6g}"
            break
        if k == n:
            break
        h_ = u.dt
        k1 = ev.velocity(q, uk)
        k2 = ev.velocity(q + h_ / 2 * k1, uk)
        k3 = ev.velocity(q + h_ / 2 * k2, uk)
        k4 = ev.velocity(q + h_ * k3, uk)
        q = q + h_ / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    checker = lambda a: float(np.max(np.abs(ev.h(a))))  # noqa: E731
    return Trajectory(np.array(ts), np.array(qs), np.array(amb), np.array(hd), np.array(pd), halted, checker)


def drift_report(t: Trajectory) -> dict:
    """Max and mean drift; constraint drift is recomputed from the stored R^8 states."""
    if len(t.t) == 0:
        raise KinematicsError("empty trajectory")
    h = np.array([t.checker(a) for a in t.ambient]) if t.checker else t.constraint_drift
    return {
        "steps": int(len(t.t)),
        "constraint_drift_max": float(np.max(h)),
        "constraint_drift_mean": float(np.mean(h)),
        "pfaffian_drift_max": float(np.max(t.pfaffian_drift)),
        "pfaffian_drift_mean": float(np.mean(t.pfaffian_drift)),
        "halted": t.halted,
    }


def write_csv(t: Trajectory, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", *STATE_NAMES, "constraint_drift", "pfaffian_drift"])
        for i in range(len(t.t)):
            row = [t.t[i], *t.q[i], t.constraint_drift[i], t.pfaffian_drift[i]]
            w.writerow([repr(float(x)) for x in row])


# ---------------------------------------------------------------------------
# flow commutators


def flow(ev: CompiledExprs, q, time: float, steps: int) -> np.ndarray:
    """RK4 flow of the compiled vector field ``ev`` for the given time."""
    q = np.asarray(q, dtype=float).copy()
    h = time / steps
    for _ in range(steps):
        k1 = ev(q)
        k2 = ev(q + h / 2 * k1)
        k3 = ev(q + h / 2 * k2)
        k4 = ev(q + h * k3)
        q = q + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return q


def flow_commutator(X: VectorField, Y: VectorField, q0, eps: float, params=None, steps: int = 20) -> np.ndarray:
    """Displacement of flow_Y(-eps) o flow_X(-eps) o flow_Y(eps) o flow_X(eps) from q0."""
    fx, fy = X.compile(params), Y.compile(params)
    q = flow(fx, q0, eps, steps)
    q = flow(fy, q, eps, steps)
    q = flow(fx, q, -eps, steps)
    q = flow(fy, q, -eps, steps)
    return q - np.asarray(q0, dtype=float)


@dataclass
class CommutatorTest:
    eps: list
    displacement: list
    slope: float
    angle: float
    reference: list

    def as_json(self) -> dict:
        return {
            "eps": self.eps,
            "displacement_norm": self.displacement,
            "slope": self.slope,
            "direction_error_rad": self.angle,
            "reference": self.reference,
        }


def _angle(a, b) -> float:
    c = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def commutator_flow_test(
    m: SnakeModel,
    q0,
    eps_list: Sequence[float] = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3),
    pair: tuple[str, str] = ("xi5", "xi4"),
    reference: str = "xi3",
    steps: int = 20,
) -> CommutatorTest:
    """Log-log slope of the commutator displacement and its direction against ``reference``.

    The direction is compared at the smallest epsilon.
    """
    X, Y = getattr(m, pair[0]), getattr(m, pair[1])
    params = m.params.floats()
    ref = getattr(m, reference).compile(params)(np.asarray(q0, dtype=float))
    if np.linalg.norm(ref) < 1e-12:
        raise KinematicsError("reference field vanishes at q0")
    eps = sorted(float(e) for e in eps_list)
    disp = [flow_commutator(X, Y, q0, e, params, steps) for e in eps]
    norms = [float(np.linalg.norm(d)) for d in disp]
    if min(norms) == 0:
        raise KinematicsError("zero displacement; fields commute at q0")
    slope = float(np.polyfit(np.log(eps), np.log(norms), 1)[0])
    ang = _angle(disp[0] / eps[0] ** 2, ref)
    return CommutatorTest(eps, norms, slope, ang, [float(x) for x in ref])
