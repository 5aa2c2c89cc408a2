"""Complex structures on R^8 compatible with the snake distribution.

Covers the exact verification of a candidate structure, the exact solver
for all constant compatible structures, holomorphic coordinates, the
beta-angle chart and the adapted complex coframe.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import linalg
from .exterior import KForm, VectorField, pair, wedge
from .snake_model import AMBIENT_CHART, M_CHART, ModelError, SnakeModel
from .symexpr import ONE_EXPR, ZERO_EXPR, ParamField, TrigExpr
from .symexpr.numeric import CompiledExprs

log = logging.getLogger(__name__)

AMBIENT = AMBIENT_CHART.names  # (x1..x4, y1..y4)


class CRError(ValueError):
    pass


@dataclass(frozen=True)
class ComplexStructureMatrix:
    """8x8 exact matrix acting on R^8 ordered (x1..x4, y1..y4)."""

    entries: tuple[tuple[ParamField, ...], ...]

    def __init__(self, entries):
        rows = tuple(tuple(x if isinstance(x, ParamField) else ParamField(x) for x in row) for row in entries)
        if len(rows) != 8 or any(len(r) != 8 for r in rows):
            raise CRError("complex structure must be 8x8")
        object.__setattr__(self, "entries", rows)

    def __neg__(self):
        return ComplexStructureMatrix([[-x for x in row] for row in self.entries])

    def numeric(self) -> np.ndarray:
        return np.array([[x.evaluate({}) for x in row] for row in self.entries])

    def as_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]

    def apply(self, v: Sequence[TrigExpr]) -> list[TrigExpr]:
        out = []
        for row in self.entries:
            terms = [v[j].scale(a) for j, a in enumerate(row) if not a.is_zero()]
            acc = ZERO_EXPR
            for t in terms:
                acc = acc + t
            out.append(acc)
        return out


def _from_blocks(B, C) -> ComplexStructureMatrix:
    rows = []
    for i in range(4):
        rows.append([0] * 4 + list(B[i]))
    for i in range(4):
        rows.append(list(C[i]) + [0] * 4)
    return ComplexStructureMatrix(rows)


REFERENCE_J = _from_blocks(
    [[-1, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, -1, 1]],
    [[1, -1, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 1, -1]],
)
STANDARD_J = _from_blocks(
    [[-1 if i == j else 0 for j in range(4)] for i in range(4)],
    [[1 if i == j else 0 for j in range(4)] for i in range(4)],
)


def verify_complex_structure(J: ComplexStructureMatrix) -> bool:
    """True iff J.J = -I exactly."""
    sq = linalg.matmul(J.entries, J.entries)
    return all(sq[i][j] == (-1 if i == j else 0) for i in range(8) for j in range(8))


# ---------------------------------------------------------------------------
# tangent data along the embedding


def pushforward(m: SnakeModel, X: VectorField) -> list[TrigExpr]:
    """Components of the R^8 image of a vector field on M."""
    return [X.apply(m.embedding[n]) for n in AMBIENT]


def _constraint_gradients(m: SnakeModel) -> list[list[TrigExpr]]:
    return [[h.diff(n).compose(cartesian=m.embedding) for n in AMBIENT] for h in m.constraints]


def _pfaffian_rows(m: SnakeModel) -> list[list[TrigExpr]]:
    return [
        [f.coeffs.get((j,), ZERO_EXPR).compose(cartesian=m.embedding) for j in range(8)] for f in m.ambient_pfaffian
    ]


@dataclass
class TangentEvaluator:
    """Numeric tangent space, constraint gradients and distribution at points of M."""

    m: SnakeModel

    def __post_init__(self):
        params = self.m.params.floats()
        frame = [pushforward(self.m, X) for X in (self.m.xi1, self.m.xi2, self.m.xi3, self.m.xi4, self.m.xi5)]
        self._frame = CompiledExprs([c for v in frame for c in v], M_CHART.names, params)
        grads = _constraint_gradients(self.m)
        self._grads = CompiledExprs([c for g in grads for c in g], M_CHART.names, params)
        self._emb = CompiledExprs([self.m.embedding[n] for n in AMBIENT], M_CHART.names, params)
        self._h = CompiledExprs(list(self.m.constraints), AMBIENT, params)

    def frame(self, p) -> np.ndarray:
        """8x5 matrix with columns xi1..xi5 pushed forward."""
        return self._frame(p).reshape(5, 8).T

    def gradients(self, p) -> np.ndarray:
        return self._grads(p).reshape(3, 8)

    def embed(self, p) -> np.ndarray:
        return self._emb(p)

    def constraint_values(self, q8) -> np.ndarray:
        return self._h(q8)


def _projector(basis: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(basis)
    return q @ q.T


@dataclass
class IntersectionResult:
    dimension: int
    equals_distribution: bool
    projector_distance: float


def cr_intersection(J: ComplexStructureMatrix, m: SnakeModel, q, evaluator: TangentEvaluator | None = None,
                    threshold: float = 1e-8) -> IntersectionResult:
    """dim{w in T_qM : Jw in T_qM} and whether that subspace is D_q.

    ``q`` is a point of the (x, y, theta, phi, psi) chart, so it lies on M
    exactly after embedding.
    """
    ev = evaluator or TangentEvaluator(m)
    q = np.asarray(q, dtype=float)
    h = ev.constraint_values(ev.embed(q))
    if np.max(np.abs(h)) > 1e-10:
        raise CRError("point is off the constraint locus")
    G = ev.gradients(q)
    Jn = J.numeric() if isinstance(J, ComplexStructureMatrix) else np.asarray(J)
    A = np.vstack([G, G @ Jn])
    _, s, vt = np.linalg.svd(A)
    scale = max(1.0, s[0])
    rank = int(np.sum(s > threshold * scale))
    kernel = vt[rank:].T
    dim = kernel.shape[1]
    D = ev.frame(q)[:, 3:5]
    if dim == 0:
        return IntersectionResult(0, False, float("inf"))
    dist = float(np.linalg.norm(_projector(kernel) - _projector(D), 2)) if dim == 2 else float("inf")
    return IntersectionResult(dim, dim == 2 and dist < threshold, dist)


# ---------------------------------------------------------------------------
# exact solver


@dataclass
class SolveResult:
    status: str  # "solutions", "empty" or "inconclusive"
    solutions: list[ComplexStructureMatrix]
    stage1_dimension: int
    stage2_method: str
    diagnostics: dict = field(default_factory=dict)


def _linear_conditions(m: SnakeModel, which: str) -> list[dict[int, TrigExpr]]:
    """Each identity sum_{kl} alpha_k J_kl v_l == 0 as {k*8+l: alpha_k v_l}."""
    alphas = _constraint_gradients(m)
    if which == "distribution":
        alphas = alphas + _pfaffian_rows(m)
    elif which != "tangent":
        raise ValueError(f"unknown condition set {which!r}")
    vs = [pushforward(m, m.xi4), pushforward(m, m.xi5)]
    out = []
    for a in alphas:
        for v in vs:
            cond = {}
            for k in range(8):
                if a[k].is_zero():
                    continue
                for l in range(8):
                    if v[l].is_zero():
                        continue
                    cond[k * 8 + l] = a[k] * v[l]
            out.append(cond)
    return out


def stage1_space(m: SnakeModel, conditions: str = "distribution") -> list[list[ParamField]]:
    """Exact basis of the linear solution space for the 64 entries."""
    rows: dict = {}
    for ci, cond in enumerate(_linear_conditions(m, conditions)):
        for var, expr in cond.items():
            for key, coef in expr.terms.items():
                row = rows.setdefault((ci, key), {})
                row[var] = row[var] + coef if var in row else coef
    dense = []
    for row in rows.values():
        r = [linalg._ZERO] * 64
        for var, c in row.items():
            r[var] = c
        if any(not x.is_zero() for x in r):
            dense.append(r)
    return linalg.nullspace(dense, 64)


def _combine(basis, coeffs):
    mat = [[ParamField(0)] * 8 for _ in range(8)]
    for b, a in zip(basis, coeffs):
        for idx, x in enumerate(b):
            if not x.is_zero():
                mat[idx // 8][idx % 8] = mat[idx // 8][idx % 8] + x * a
    return mat


def _exact_stage2(basis) -> tuple[list[list[list[ParamField]]], list[str]]:
    """Solve (sum a_i N_i)^2 = -I exactly with sympy; returns rational solutions."""
    import sympy

    d = len(basis)
    a = sympy.symbols(f"a0:{d}")
    s1, s2, s3 = sympy.symbols("s1 s2 s3")
    syms = {"s1": s1, "s2": s2, "s3": s3}

    def to_sympy(p: ParamField):
        if p.is_constant():
            return sympy.Rational(p.as_fraction().numerator, p.as_fraction().denominator)
        def poly(terms):
            return sum(sympy.Rational(c.numerator, c.denominator) * s1 ** e[0] * s2 ** e[1] * s3 ** e[2] for e, c in terms)
        return poly(p.numerator_terms()) / poly(p.denominator_terms())

    N = [sympy.Matrix(8, 8, [to_sympy(x) for x in b]) for b in basis]
    Jm = sum((ai * Ni for ai, Ni in zip(a, N)), sympy.zeros(8, 8))
    eqs = [sympy.together(e) for e in (Jm * Jm + sympy.eye(8))]
    eqs = [sympy.numer(e) for e in eqs if e != 0]
    eqs = list(dict.fromkeys(sympy.expand(e) for e in eqs))
    if not eqs:
        raise CRError("J^2 = -I holds identically on the linear space; solution set is not finite")
    sols = sympy.solve(eqs, a, dict=True)
    exact, other = [], []
    for s in sols:
        vals = [s.get(ai, ai) for ai in a]
        if any(v.free_symbols & set(a) for v in vals):
            other.append(str(vals))
            continue
        if all(v.is_rational for v in vals):
            coeffs = [ParamField(Fraction(int(v.p), int(v.q))) for v in vals]
            exact.append(_combine(basis, coeffs))
        else:
            # parametric in s1, s3 or irrational/complex: try ParamField conversion
            try:
                coeffs = [_sympy_to_param(v, syms) for v in vals]
                exact.append(_combine(basis, coeffs))
            except (ValueError, TypeError):
                other.append(str(vals))
    return exact, other


def _sympy_to_param(v, syms) -> ParamField:
    import sympy

    num, den = sympy.fraction(sympy.together(v))
    out = []
    for expr in (num, den):
        poly = sympy.Poly(sympy.expand(expr), *syms.values())
        acc = ParamField(0)
        for monom, c in poly.terms():
            if not c.is_rational:
                raise ValueError("non-rational coefficient")
            t = ParamField(Fraction(int(c.p), int(c.q)))
            for name, e in zip(syms, monom):
                if e:
                    t = t * ParamField.symbol(name) ** int(e)
            acc = acc + t
        out.append(acc)
    return out[0] / out[1]


def _newton_stage2(basis, starts: int, seed: int, tol: float = 1e-12):
    """Multi-start Gauss-Newton on the quadratic system, then rationalise."""
    N = np.array([[x.evaluate({}) for x in b] for b in basis]).reshape(len(basis), 8, 8)
    rng = np.random.default_rng(seed)
    found, converged = [], 0
    I = np.eye(8)
    for _ in range(starts):
        a = rng.normal(size=len(basis))
        for _it in range(200):
            Jm = np.tensordot(a, N, 1)
            R = (Jm @ Jm + I).ravel()
            if np.max(np.abs(R)) < tol:
                break
            Jac = np.stack([(Nk @ Jm + Jm @ Nk).ravel() for Nk in N], axis=1)
            step, *_ = np.linalg.lstsq(Jac, -R, rcond=None)
            a = a + step
        Jm = np.tensordot(a, N, 1)
        if np.max(np.abs(Jm @ Jm + I)) < tol:
            converged += 1
            q = [Fraction(x).limit_denominator(1000) for x in a]
            cand = _combine(basis, [ParamField(x) for x in q])
            if verify_complex_structure(ComplexStructureMatrix(cand)):
                found.append(cand)
    return found, converged


def solve_complex_structure(
    m: SnakeModel,
    conditions: str = "distribution",
    n_check: int = 20,
    seed: int = 0,
    newton_starts: int = 100,
) -> SolveResult:
    """All constant complex structures J on R^8 with J(TM) n TM = D.

    ``conditions="tangent"`` imposes only dh_i(J xi) = 0 in the linear
    stage; the default also imposes the Pfaffian forms on J xi, which any
    solution of the full problem must satisfy (J preserves D).
    """
    basis = stage1_space(m, conditions)
    d = len(basis)
    diag: dict = {"linear_conditions": conditions, "stage1_dimension": d}
    if d == 0:
        return SolveResult("empty", [], 0, "none", diag)
    if d <= 8:
        method = "exact-elimination"
        cands, other = _exact_stage2(basis)
        diag["non_rational_solutions"] = other
        inconclusive = False
    else:
        if not m.params.is_numeric:
            raise CRError("the Newton stage needs numeric parameters")
        method = "newton"
        cands, converged = _newton_stage2(basis, newton_starts, seed)
        diag["newton_converged_starts"] = converged
        diag["seed"] = seed
        inconclusive = converged == 0 or (converged > 0 and not cands)
    sols = []
    for c in cands:
        Jm = ComplexStructureMatrix(c)
        if not verify_complex_structure(Jm):
            continue
        if m.params.is_numeric:
            ok = _filter_stage3(Jm, m, n_check, seed)
            diag.setdefault("stage3", []).append(ok)
            if not ok:
                continue
        if Jm not in sols:
            sols.append(Jm)
    if sols:
        return SolveResult("solutions", sols, d, method, diag)
    if inconclusive:
        return SolveResult("inconclusive", [], d, method, diag)
    return SolveResult("empty", [], d, method, diag)


def _filter_stage3(J, m, n_check, seed) -> bool:
    ev = TangentEvaluator(m)
    rng = np.random.default_rng(seed)
    pts = M_CHART.sample(rng, n_check)
    return all(cr_intersection(J, m, p, ev).equals_distribution for p in pts)


# ---------------------------------------------------------------------------
# holomorphic coordinates


# z_k = sum of (real part row, imaginary part row) over (x1..x4, y1..y4)
HOLOMORPHIC_COORDINATES = {
    "z1": ({"x1": 1}, {"y2": 1, "y1": -1}),
    "z2": ({"x2": 1}, {"y2": 1}),
    "z3": ({"x3": 1}, {"y3": 1}),
    "z4": ({"x4": 1}, {"y4": 1, "y3": -1}),
}


def _row(d) -> list[Fraction]:
    return [Fraction(d.get(n, 0)) for n in AMBIENT]


def holomorphic_sign(J: ComplexStructureMatrix, re_row, im_row) -> int | None:
    """epsilon with (dz o J) = epsilon * i * dz, or None."""
    Jf = linalg.as_fraction_matrix(J.entries)
    rJ = [sum(re_row[k] * Jf[k][l] for k in range(8)) for l in range(8)]
    iJ = [sum(im_row[k] * Jf[k][l] for k in range(8)) for l in range(8)]
    # i*dz = -im + i*re
    for eps in (1, -1):
        if rJ == [-eps * x for x in im_row] and iJ == [eps * x for x in re_row]:
            return eps
    return None


def holomorphic_check(J: ComplexStructureMatrix, coordinates=None, conjugate: bool = False) -> dict[str, int | None]:
    coords = coordinates or HOLOMORPHIC_COORDINATES
    out = {}
    for name, (re, im) in coords.items():
        re_row, im_row = _row(re), _row(im)
        if conjugate:
            im_row = [-x for x in im_row]
        out[name] = holomorphic_sign(J, re_row, im_row)
    if any(v is None for v in out.values()):
        raise CRError(f"coordinates are not J-holomorphic: {out}")
    return out


def global_orientation(signs: dict[str, int | None]) -> int | None:
    vals = set(signs.values())
    return vals.pop() if len(vals) == 1 and None not in vals else None


# ---------------------------------------------------------------------------
# adapted coframe


def _require_half(m: SnakeModel):
    if not (m.params.s2.is_constant() and m.params.s2.as_fraction() == Fraction(1, 2)):
        raise CRError("this construction needs s2 = 1/2")


@dataclass
class ComplexForm:
    """Complex one-form stored as (real, imaginary) parts."""

    re: KForm
    im: KForm

    def conjugate(self) -> "ComplexForm":
        return ComplexForm(self.re, -self.im)

    def __eq__(self, other):
        return isinstance(other, ComplexForm) and self.re == other.re and self.im == other.im

    def pair(self, X: VectorField) -> tuple[TrigExpr, TrigExpr]:
        return pair(self.re, X), pair(self.im, X)


def complex_wedge(a: ComplexForm, b: ComplexForm) -> ComplexForm:
    return ComplexForm(wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re))


@dataclass
class AdaptedCoframe:
    forms: tuple[ComplexForm, ...]
    reality: dict = field(default_factory=lambda: {"conjugate_pairs": [(1, 2), (4, 5)], "real": [3]})

    def top_wedge(self) -> ComplexForm:
        w = self.forms[0]
        for f in self.forms[1:]:
            w = complex_wedge(w, f)
        return w

    def matrix_exprs(self) -> list[list[tuple[TrigExpr, TrigExpr]]]:
        """Rows: forms; columns: chart coordinates; entries (re, im)."""
        return [[(f.re.coeff(n), f.im.coeff(n)) for n in M_CHART.names] for f in self.forms]


def adapted_coframe(m: SnakeModel, n_points: int = 20, seed: int = 0) -> tuple[AdaptedCoframe, np.ndarray]:
    """The complex coframe (U1 + iU2, U1 - iU2, U3, dz2, dz2bar) on the M chart.

    Returns the coframe and the absolute value of the 5-fold wedge at
    ``n_points`` sample points.
    """
    _require_half(m)
    u1, u2, u3 = m.pfaffian
    zero = KForm(M_CHART, 1, {})
    x2, y2 = m.embedding["x2"], m.embedding["y2"]
    dx2 = KForm.one_form(M_CHART, {n: x2.diff(n) for n in M_CHART.names})
    dy2 = KForm.one_form(M_CHART, {n: y2.diff(n) for n in M_CHART.names})
    forms = (
        ComplexForm(u1, u2),
        ComplexForm(u1, -u2),
        ComplexForm(u3, zero),
        ComplexForm(dx2, dy2),
        ComplexForm(dx2, -dy2),
    )
    c = AdaptedCoframe(forms)
    top = c.top_wedge()
    if top.re.is_zero() and top.im.is_zero():
        raise CRError("adapted coframe is degenerate: 5-fold wedge vanishes identically")
    key = tuple(range(5))
    exprs = [top.re.coeffs.get(key, ZERO_EXPR), top.im.coeffs.get(key, ZERO_EXPR)]
    ev = CompiledExprs(exprs, M_CHART.names, m.params.floats())
    rng = np.random.default_rng(seed)
    vals = np.array([np.hypot(*ev(p)) for p in M_CHART.sample(rng, n_points)])
    return c, vals


# ---------------------------------------------------------------------------
# beta chart


BETA_CHART_NAMES = ("beta1", "beta2", "beta3", "x2", "y2")


@dataclass
class BetaChart:
    """Coordinates (beta1, beta2, beta3, Re z2, Im z2) on M.

    ``to_ambient`` gives x1..y4 in these coordinates; ``angle_map`` gives
    each beta as an integer combination of (theta, phi, psi) plus a
    multiple of pi/2; ``from_chart`` gives (Re z2, Im z2) on the M chart.
    """

    to_ambient: dict[str, TrigExpr]
    angle_map: dict[str, tuple[dict[str, int], int]]
    from_chart: dict[str, TrigExpr]

    def as_json(self) -> dict:
        return {
            "to_ambient": {k: str(v) for k, v in self.to_ambient.items()},
            "angle_map": {
                k: {"combination": comb, "offset": f"{q}*pi/2"} for k, (comb, q) in self.angle_map.items()
            },
        }


def beta_substitution(s1: ParamField, s3: ParamField) -> dict[str, TrigExpr]:
    """R^8 coordinates through the beta angles and z2 = x2 + i y2."""
    x2, y2 = TrigExpr.var("x2"), TrigExpr.var("y2")
    S1, S3 = TrigExpr.const(s1), TrigExpr.const(s3)
    x1 = x2 + S1 * TrigExpr.cos(beta1=1)
    y1 = y2 - S1 * TrigExpr.sin(beta1=1)
    x3 = x2 - TrigExpr.cos(beta2=1)
    y3 = y2 - TrigExpr.sin(beta2=1)
    x4 = x3 + S3 * TrigExpr.cos(beta3=1)
    y4 = y3 + S3 * TrigExpr.sin(beta3=1)
    return {"x1": x1, "x2": x2, "x3": x3, "x4": x4, "y1": y1, "y2": y2, "y3": y3, "y4": y4}


def _find_angle(cos_target: TrigExpr, sin_target: TrigExpr) -> tuple[dict[str, int], int]:
    for coeffs in product((0, 1, -1), repeat=3):
        comb = {n: c for n, c in zip(("theta", "phi", "psi"), coeffs) if c}
        if not comb:
            continue
        for q in range(4):
            c = TrigExpr.cos(beta1=1).compose(angles={"beta1": (comb, q)})
            s = TrigExpr.sin(beta1=1).compose(angles={"beta1": (comb, q)})
            if c == cos_target and s == sin_target:
                return comb, q
    raise CRError("beta angle is not an affine function of the chart angles")


def beta_chart(m: SnakeModel) -> BetaChart:
    _require_half(m)
    p = m.params
    sub = beta_substitution(p.s1, p.s3)
    for i, h in enumerate(m.constraints, start=1):
        if not h.compose(cartesian=sub).is_zero():
            raise CRError(f"beta substitution does not annihilate h{i}")
    e = m.embedding
    inv1 = TrigExpr.const(ParamField(1) / p.s1)
    inv3 = TrigExpr.const(ParamField(1) / p.s3)
    targets = {
        "beta1": ((e["x1"] - e["x2"]) * inv1, (e["y2"] - e["y1"]) * inv1),
        "beta2": (e["x2"] - e["x3"], e["y2"] - e["y3"]),
        "beta3": ((e["x4"] - e["x3"]) * inv3, (e["y4"] - e["y3"]) * inv3),
    }
    angle_map = {k: _find_angle(*v) for k, v in targets.items()}
    return BetaChart(sub, angle_map, {"x2": e["x2"], "y2": e["y2"]})


def beta_roundtrip_residuals(m: SnakeModel, bc: BetaChart) -> dict[str, TrigExpr]:
    """to_ambient composed with (angle map, z2 on the chart) minus the embedding."""
    out = {}
    for name, expr in bc.to_ambient.items():
        back = expr.compose(cartesian=bc.from_chart, angles=bc.angle_map)
        out[name] = back - m.embedding[name]
    return out


# ---------------------------------------------------------------------------
# eigenfields


@dataclass
class Eigenfields:
    """zeta_plus/minus as R^8 vector fields along M, (re, im) component lists."""

    generator: str
    plus: tuple[list[TrigExpr], list[TrigExpr]]
    minus: tuple[list[TrigExpr], list[TrigExpr]]


def _rank3_minors_vanish(vectors: list[list[TrigExpr]]) -> bool:
    from .exterior import determinant

    idx = range(8)
    from itertools import combinations

    for r in combinations(idx, 3):
        mat = [[v[i] for v in vectors] for i in r]
        if not determinant(mat).is_zero():
            return False
    return True


def eigenfields(m: SnakeModel, J: ComplexStructureMatrix, generator: str = "xi5") -> Eigenfields:
    """zeta_pm = xi -/+ i J xi for a generator xi of D; checks J xi lies in D."""
    _require_half(m)
    if not verify_complex_structure(J):
        raise CRError("J is not a complex structure")
    xi = pushforward(m, getattr(m, generator))
    Jxi = J.apply(xi)
    d4, d5 = pushforward(m, m.xi4), pushforward(m, m.xi5)
    if not _rank3_minors_vanish([Jxi, d4, d5]):
        raise CRError("J does not preserve the distribution")
    plus = (xi, [-c for c in Jxi])
    minus = (xi, list(Jxi))
    return Eigenfields(generator, plus, minus)


def eigen_residual(J: ComplexStructureMatrix, zeta: tuple[list[TrigExpr], list[TrigExpr]], sign: int) -> bool:
    """Exact test of J zeta = sign * i * zeta."""
    re, im = zeta
    Jre, Jim = J.apply(re), J.apply(im)
    # sign*i*(re + i im) = -sign*im + i*sign*re
    return all((a + b.scale(sign)).is_zero() for a, b in zip(Jre, im)) and all(
        (a - b.scale(sign)).is_zero() for a, b in zip(Jim, re)
    )
