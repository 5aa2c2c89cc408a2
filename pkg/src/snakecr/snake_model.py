"""The three-segment wheeled snake: constraints, embedding, Pfaffian system, frame.

Everything here is re-derived from the geometry (segment lengths and the
non-skidding conditions) and then compared with a transcription of the
reference formulas, which are kept verbatim in :data:`REFERENCE_FORMULAS`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Mapping

import numpy as np

from .exterior import (
    Chart,
    Distribution,
    KForm,
    VectorField,
    determinant,
    growth_vector,
    lie_bracket,
    pair,
)
from .symexpr import ONE_EXPR, ZERO_EXPR, ParamField, TrigExpr, as_param, combine, parse

M_CHART = Chart(("x", "y", "theta", "phi", "psi"))
AMBIENT_CHART = Chart(("x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"))


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SnakeParams:
    """Segment length ratios s1, s3 and middle-wheel placement s2."""

    s1: ParamField
    s2: ParamField
    s3: ParamField

    def __init__(self, s1="s1", s2="s2", s3="s3"):
        object.__setattr__(self, "s1", _coerce_param(s1, "s1"))
        object.__setattr__(self, "s2", _coerce_param(s2, "s2"))
        object.__setattr__(self, "s3", _coerce_param(s3, "s3"))
        for name in ("s1", "s3"):
            v = getattr(self, name)
            if v.is_constant() and v.as_fraction() <= 0:
                raise ModelError(f"{name} must be positive, got {v}")
        if self.s2.is_constant() and not 0 < self.s2.as_fraction() < 1:
            raise ModelError(f"s2 must lie strictly between 0 and 1, got {self.s2}")

    @property
    def is_numeric(self) -> bool:
        return all(v.is_constant() for v in (self.s1, self.s2, self.s3))

    def values(self) -> dict[str, Fraction]:
        """Exact values of the numeric parameters."""
        return {k: getattr(self, k).as_fraction() for k in ("s1", "s2", "s3") if getattr(self, k).is_constant()}

    def floats(self) -> dict[str, float]:
        return {k: float(v) for k, v in self.values().items()}

    def as_json(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("s1", "s2", "s3")}


def _coerce_param(v, name) -> ParamField:
    if isinstance(v, str) and v not in ("s1", "s2", "s3"):
        from .symexpr import parse_param

        return parse_param(v)
    if isinstance(v, float):
        raise ModelError(f"{name} must be exact (use a 'p/q' string), got float {v}")
    return as_param(v)


@dataclass(frozen=True)
class Conventions:
    """Sign and placement choices that fix the embedding.

    ``wheel`` selects where the middle wheel sits: "pfaffian" puts it at
    (1 - s2) q2 + s2 q3, "constraint" at s2 q2 + (1 - s2) q3.  ``sign_s1``
    and ``sign_s3`` orient the outer offsets, ``orientation`` the angles
    phi and psi.
    """

    wheel: str = "pfaffian"
    sign_s1: int = 1
    sign_s3: int = 1
    orientation: int = 1

    def as_json(self) -> dict:
        return {
            "wheel": self.wheel,
            "sign_s1": self.sign_s1,
            "sign_s3": self.sign_s3,
            "orientation": self.orientation,
            "middle_wheel_point": "(1-s2)*q2 + s2*q3" if self.wheel == "pfaffian" else "s2*q2 + (1-s2)*q3",
        }


@dataclass
class SnakeModel:
    params: SnakeParams
    conventions: Conventions
    constraints: tuple[TrigExpr, TrigExpr, TrigExpr]
    embedding: dict[str, TrigExpr]
    ambient_pfaffian: tuple[KForm, KForm, KForm]
    pfaffian: tuple[KForm, KForm, KForm]
    xi4: VectorField
    xi5: VectorField
    xi3: VectorField
    xi2: VectorField
    xi1: VectorField
    symmetries: tuple[VectorField, VectorField, VectorField]
    wheel_points: tuple = field(default=())
    segments: tuple = field(default=())

    @property
    def frame(self) -> tuple[VectorField, ...]:
        """(xi1, ..., xi5)."""
        return (self.xi1, self.xi2, self.xi3, self.xi4, self.xi5)

    @property
    def distribution(self) -> Distribution:
        return Distribution(M_CHART, (self.xi4, self.xi5))

    def embed_numeric(self, point) -> np.ndarray:
        from .symexpr.numeric import CompiledExprs

        c = CompiledExprs([self.embedding[n] for n in AMBIENT_CHART.names], M_CHART.names, self.params.floats())
        return c(point)


# ---------------------------------------------------------------------------
# construction


def _v(name: str) -> TrigExpr:
    return TrigExpr.var(name)


def constraint_functions(p: SnakeParams) -> tuple[TrigExpr, TrigExpr, TrigExpr]:
    """Squared segment lengths minus their prescribed values, on R^8."""
    def seg(a, b, length):
        dx = _v(f"x{b}") - _v(f"x{a}")
        dy = _v(f"y{b}") - _v(f"y{a}")
        return dx * dx + dy * dy - TrigExpr.const(length) * TrigExpr.const(length)

    return seg(1, 2, p.s1), seg(2, 3, 1), seg(3, 4, p.s3)


def embedding_map(p: SnakeParams, conv: Conventions) -> dict[str, TrigExpr]:
    """(x, y, theta, phi, psi) -> (x1..x4, y1..y4); (x, y) is the middle wheel."""
    s1, s2, s3 = (TrigExpr.const(v) for v in (p.s1, p.s2, p.s3))
    c, s = TrigExpr.cos(theta=1), TrigExpr.sin(theta=1)
    x, y = _v("x"), _v("y")
    front, back = (s2, ONE_EXPR - s2) if conv.wheel == "pfaffian" else (ONE_EXPR - s2, s2)
    x2, y2 = x + front * c, y + front * s
    x3, y3 = x - back * c, y - back * s
    o = conv.orientation
    x1 = x2 - s1 * TrigExpr.trig("cos", {"theta": 1, "phi": o}, conv.sign_s1)
    y1 = y2 - s1 * TrigExpr.trig("sin", {"theta": 1, "phi": o}, conv.sign_s1)
    x4 = x3 + s3 * TrigExpr.trig("cos", {"theta": 1, "psi": o}, conv.sign_s3)
    y4 = y3 + s3 * TrigExpr.trig("sin", {"theta": 1, "psi": o}, conv.sign_s3)
    return {"x1": x1, "x2": x2, "x3": x3, "x4": x4, "y1": y1, "y2": y2, "y3": y3, "y4": y4}


def _point(i) -> tuple[TrigExpr, TrigExpr]:
    return _v(f"x{i}"), _v(f"y{i}")


def wheel_points(p: SnakeParams, conv: Conventions):
    """Wheel positions and segment direction vectors as R^8 expressions."""
    s2 = TrigExpr.const(p.s2)
    q = {i: _point(i) for i in range(1, 5)}
    if conv.wheel == "pfaffian":
        a, b = ONE_EXPR - s2, s2
    else:
        a, b = s2, ONE_EXPR - s2
    mid = (a * q[2][0] + b * q[3][0], a * q[2][1] + b * q[3][1])
    wheels = (q[1], mid, q[4])
    dirs = (
        (q[2][0] - q[1][0], q[2][1] - q[1][1]),
        (q[2][0] - q[3][0], q[2][1] - q[3][1]),
        (q[4][0] - q[3][0], q[4][1] - q[3][1]),
    )
    return wheels, dirs


def ambient_pfaffian_forms(p: SnakeParams, conv: Conventions) -> tuple[KForm, KForm, KForm]:
    """Cross-product forms dw x d / |d| on R^8 for each wheel w, segment d."""
    wheels, dirs = wheel_points(p, conv)
    lengths = (p.s1, ParamField(1), p.s3)
    forms = []
    for (wx, wy), (dx, dy), length in zip(wheels, dirs, lengths):
        coeffs: dict = {}
        for j, name in enumerate(AMBIENT_CHART.names):
            # d(w) . e_j crossed with d
            cx, cy = wx.diff(name), wy.diff(name)
            term = (cx * dy - cy * dx) / TrigExpr.const(length)
            if not term.is_zero():
                coeffs[(j,)] = term
        forms.append(KForm(AMBIENT_CHART, 1, coeffs))
    return tuple(forms)


def pullback_one_form(form: KForm, emb: Mapping[str, TrigExpr]) -> KForm:
    """Pull an R^8 one-form back to the M chart along the embedding."""
    out: dict = {}
    for (j,), coef in form.coeffs.items():
        name = AMBIENT_CHART.names[j]
        c = coef.compose(cartesian=emb)
        for k, mname in enumerate(M_CHART.names):
            t = c * emb[name].diff(mname)
            if not t.is_zero():
                out[(k,)] = out[(k,)] + t if (k,) in out else t
    return KForm(M_CHART, 1, out)


def _normalize_sign(form: KForm) -> tuple[KForm, int]:
    dx = form.coeff("x")
    if dx.is_zero():
        return form, 1
    lead = dx.sorted_terms()[0][1]
    neg = lead.is_constant() and lead.as_fraction() < 0
    return (-form, -1) if neg else (form, 1)


def _solve_kernel(forms: tuple[KForm, KForm, KForm]) -> tuple[VectorField, VectorField]:
    """Kernel basis with the normalisations used throughout.

    xi4 has unit theta component and no motion along the middle segment;
    xi5 has zero theta component and (x, y) part (cos theta, sin theta).
    """
    u1, u2, u3 = forms
    if not (u1.coeff("psi").is_zero() and u3.coeff("phi").is_zero()):
        raise ModelError("outer Pfaffian forms couple both outer angles")
    a1, a3 = u1.coeff("phi"), u3.coeff("psi")
    if not (a1.is_constant() and a3.is_constant()) or a1.is_zero() or a3.is_zero():
        raise ModelError("kernel rank is not 2: outer angle coefficients degenerate")
    if not (u2.coeff("phi").is_zero() and u2.coeff("psi").is_zero()):
        raise ModelError("middle Pfaffian form involves outer angles")
    c, s = TrigExpr.cos(theta=1), TrigExpr.sin(theta=1)
    tangent = VectorField.from_dict(M_CHART, {"x": c, "y": s})
    normal = VectorField.from_dict(M_CHART, {"x": s, "y": -c})
    n2 = pair(u2, normal)
    if not n2.is_constant() or n2.is_zero():
        raise ModelError("kernel rank is not 2: middle form not transverse to the segment normal")
    base4 = VectorField.from_dict(M_CHART, {"theta": ONE_EXPR})
    base4 = base4 - normal.scale(pair(u2, base4) / n2)
    if not pair(u2, tangent).is_zero():
        raise ModelError("kernel rank is not 2: middle wheel moves sideways along its segment")

    def complete(base):
        phi = -pair(u1, base) / a1
        psi = -pair(u3, base) / a3
        return base + VectorField.from_dict(M_CHART, {"phi": phi, "psi": psi})

    xi4, xi5 = complete(base4), complete(tangent)
    for u in forms:
        for X in (xi4, xi5):
            if not pair(u, X).is_zero():
                raise ModelError("kernel construction failed: Pfaffian form does not annihilate frame")
    return xi4, xi5


def symmetry_fields() -> tuple[VectorField, VectorField, VectorField]:
    """Translations and the rotation y d/dx - x d/dy - d/dtheta."""
    return (
        VectorField.from_dict(M_CHART, {"x": ONE_EXPR}),
        VectorField.from_dict(M_CHART, {"y": ONE_EXPR}),
        VectorField.from_dict(M_CHART, {"x": _v("y"), "y": -_v("x"), "theta": -ONE_EXPR}),
    )


def _build(p: SnakeParams, conv: Conventions) -> SnakeModel:
    h = constraint_functions(p)
    emb = embedding_map(p, conv)
    amb = ambient_pfaffian_forms(p, conv)
    pulled, amb_signed = [], []
    for f in amb:
        pb, sign = _normalize_sign(pullback_one_form(f, emb))
        pulled.append(pb)
        amb_signed.append(f if sign > 0 else -f)
    pulled = tuple(pulled)
    xi4, xi5 = _solve_kernel(pulled)
    xi3 = lie_bracket(xi5, xi4)
    xi2 = lie_bracket(xi5, xi3)
    xi1 = lie_bracket(xi4, xi3)
    wheels, dirs = wheel_points(p, conv)
    return SnakeModel(
        params=p,
        conventions=conv,
        constraints=h,
        embedding=emb,
        ambient_pfaffian=tuple(amb_signed),
        pfaffian=pulled,
        xi4=xi4,
        xi5=xi5,
        xi3=xi3,
        xi2=xi2,
        xi1=xi1,
        symmetries=symmetry_fields(),
        wheel_points=wheels,
        segments=dirs,
    )


def build_model(p: SnakeParams, wheel: str = "pfaffian", conventions: Conventions | None = None) -> SnakeModel:
    """Derive the model, choosing signs that best match the reference formulas.

    With ``conventions`` given, no search is done.  Otherwise the 2x2x2
    choices of (sign_s1, sign_s3, orientation) are tried and the one with the
    most exact matches against the reference transcription wins; ties keep
    the first candidate, which is the all-positive choice.
    """
    if wheel not in ("pfaffian", "constraint"):
        raise ModelError(f"unknown wheel convention {wheel!r}")
    if conventions is not None:
        return _build(p, conventions)
    lit = literal_model(p)
    best, best_score = None, None
    for s1, s3, o in product((1, -1), (1, -1), (1, -1)):
        conv = Conventions(wheel, s1, s3, o)
        try:
            m = _build(p, conv)
        except ModelError:
            continue
        rep = discrepancy_report(m, lit)
        score = sum({"match": 2, "sign-flip": 1, "mismatch": 0}[e.verdict] for e in rep.entries)
        if best_score is None or score > best_score:
            best, best_score = m, score
    if best is None:
        raise ModelError("no sign convention yields a rank-2 kernel")
    return best


# ---------------------------------------------------------------------------
# reference transcription


REFERENCE_FORMULAS = {
    "h1": "(x2-x1)^2+(y2-y1)^2-s1^2",
    "h2": "(x3-x2)^2+(y3-y2)^2-1",
    "h3": "(x4-x3)^2+(y4-y3)^2-s3^2",
    "Upsilon1": {"x": "sin(phi+theta)", "y": "-cos(phi+theta)", "theta": "-(s2*cos(phi)-s1)", "phi": "s1"},
    "Upsilon2": {"x": "sin(theta)", "y": "-cos(theta)"},
    "Upsilon3": {"x": "sin(psi+theta)", "y": "-cos(psi+theta)", "theta": "-((1-s2)*cos(psi)-s3)", "psi": "-s3"},
    "xi4": {"theta": "1", "phi": "-(1-s2/s1*cos(phi))", "psi": "-(1-(1-s2)/s3*cos(psi))"},
    "xi5": {"x": "cos(theta)", "y": "sin(theta)", "phi": "1/s1*sin(phi)", "psi": "-1/s3*sin(psi)"},
    "xi3": {
        "x": "sin(theta)",
        "y": "-cos(theta)",
        "phi": "-1/s1*(s2/s1-cos(phi))",
        "psi": "1/s3*((1-s2)/s3-cos(psi))",
    },
    "xi2": {"phi": "-1/s1^2*(1-s2/s1*cos(phi))", "psi": "-1/s3^2*(1-(1-s2)/s3*cos(psi))"},
    "xi1": {
        "x": "cos(theta)",
        "y": "sin(theta)",
        "phi": "(s1^2-s2^2)/s1^3*sin(phi)",
        "psi": "((1-s2)^2-s3^2)/s3^3*sin(psi)",
    },
}


@dataclass
class LiteralModel:
    """Reference formulas as printed, specialised to the given parameters."""

    params: SnakeParams
    constraints: tuple[TrigExpr, TrigExpr, TrigExpr]
    pfaffian: tuple[KForm, KForm, KForm]
    xi4: VectorField
    xi5: VectorField
    xi3: VectorField
    xi2: VectorField
    xi1: VectorField

    def pairings(self) -> dict[str, TrigExpr]:
        out = {}
        for a, u in enumerate(self.pfaffian, start=1):
            for b, X in ((4, self.xi4), (5, self.xi5)):
                out[f"Upsilon{a}(xi{b})"] = pair(u, X)
        return out


def _param_subs(p: SnakeParams) -> dict:
    return {k: getattr(p, k) for k in ("s1", "s2", "s3") if getattr(p, k) != ParamField.symbol(k)}


def literal_model(p: SnakeParams) -> LiteralModel:
    """Transcribe the reference formulas; no invariant is assumed to hold."""
    subs = _param_subs(p)
    P = lambda text: parse(text).specialize(subs)
    forms = tuple(
        KForm.one_form(M_CHART, {k: P(v) for k, v in REFERENCE_FORMULAS[f"Upsilon{i}"].items()}) for i in (1, 2, 3)
    )
    fields = {
        name: VectorField.from_dict(M_CHART, {k: P(v) for k, v in REFERENCE_FORMULAS[name].items()})
        for name in ("xi4", "xi5", "xi3", "xi2", "xi1")
    }
    return LiteralModel(
        params=p,
        constraints=tuple(P(REFERENCE_FORMULAS[f"h{i}"]) for i in (1, 2, 3)),
        pfaffian=forms,
        **fields,
    )


# ---------------------------------------------------------------------------
# reconciliation


@dataclass
class DiscrepancyEntry:
    formula_id: str
    literal: str
    derived: str
    difference: str
    verdict: str
    flipped: tuple[str, ...] = ()

    def as_json(self) -> dict:
        return {
            "id": self.formula_id,
            "literal": self.literal,
            "derived": self.derived,
            "difference": self.difference,
            "verdict": self.verdict,
            "flipped_components": list(self.flipped),
        }


@dataclass
class DiscrepancyReport:
    entries: list[DiscrepancyEntry]
    literal_pairings: dict[str, str]

    def verdicts(self) -> dict[str, str]:
        return {e.formula_id: e.verdict for e in self.entries}

    def as_json(self) -> dict:
        return {"entries": [e.as_json() for e in self.entries], "literal_pairings": self.literal_pairings}


def _classify(names, lit_comps, der_comps):
    """match / sign-flip (negating a minimal set of components) / mismatch."""
    diffs = [l - d for l, d in zip(lit_comps, der_comps)]
    if all(x.is_zero() for x in diffs):
        return "match", (), diffs
    # whole-object negation first, then minimal component subsets
    if all((l + d).is_zero() for l, d in zip(lit_comps, der_comps)):
        return "sign-flip", ("all",), diffs
    n = len(names)
    candidates = []
    for mask in range(1, 1 << n):
        ok = True
        for i in range(n):
            l, d = lit_comps[i], der_comps[i]
            if mask >> i & 1:
                if d.is_zero() or not (l + d).is_zero():
                    ok = False
                    break
            elif not (l - d).is_zero():
                ok = False
                break
        if ok:
            candidates.append(mask)
    if candidates:
        mask = min(candidates, key=lambda m: bin(m).count("1"))
        return "sign-flip", tuple(names[i] for i in range(n) if mask >> i & 1), diffs
    return "mismatch", (), diffs


def _comp_text(names, comps, prefix):
    parts = [f"({c})*{prefix}{n}" for n, c in zip(names, comps) if not c.is_zero()]
    return " + ".join(parts) if parts else "0"


def discrepancy_report(m: SnakeModel, lit: LiteralModel) -> DiscrepancyReport:
    entries = []
    for i, (hl, hd) in enumerate(zip(lit.constraints, m.constraints), start=1):
        verdict, flipped, diffs = _classify(("f",), [hl], [hd])
        entries.append(DiscrepancyEntry(f"h{i}", str(hl), str(hd), str(diffs[0]), verdict, flipped))
    names = M_CHART.names
    for i, (ul, ud) in enumerate(zip(lit.pfaffian, m.pfaffian), start=1):
        lc = [ul.coeff(n) for n in names]
        dc = [ud.coeff(n) for n in names]
        verdict, flipped, diffs = _classify(names, lc, dc)
        entries.append(
            DiscrepancyEntry(
                f"Upsilon{i}", _comp_text(names, lc, "d"), _comp_text(names, dc, "d"), _comp_text(names, diffs, "d"), verdict, flipped
            )
        )
    for name in ("xi4", "xi5", "xi3", "xi2", "xi1"):
        Xl, Xd = getattr(lit, name), getattr(m, name)
        verdict, flipped, diffs = _classify(names, list(Xl.comps), list(Xd.comps))
        entries.append(
            DiscrepancyEntry(
                name,
                _comp_text(names, Xl.comps, "d/d"),
                _comp_text(names, Xd.comps, "d/d"),
                _comp_text(names, diffs, "d/d"),
                verdict,
                flipped,
            )
        )
    pairings = {k: str(v) for k, v in lit.pairings().items()}
    return DiscrepancyReport(entries, pairings)


# ---------------------------------------------------------------------------
# checks


def constraint_residuals(m: SnakeModel) -> list[TrigExpr]:
    """h_i composed with the embedding; identically zero for a valid model."""
    return [h.compose(cartesian=m.embedding) for h in m.constraints]


def pairing_table(m: SnakeModel) -> dict[str, TrigExpr]:
    out = {}
    for a, u in enumerate(m.pfaffian, start=1):
        for b, X in ((4, m.xi4), (5, m.xi5)):
            out[f"Upsilon{a}(xi{b})"] = pair(u, X)
    return out


def non_skidding_residuals(m: SnakeModel) -> dict[str, TrigExpr]:
    """det(wheel velocity, segment direction) along xi4 and xi5 flows."""
    out = {}
    for i, ((wx, wy), (dx, dy)) in enumerate(zip(m.wheel_points, m.segments), start=1):
        wx_, wy_ = wx.compose(cartesian=m.embedding), wy.compose(cartesian=m.embedding)
        dx_, dy_ = dx.compose(cartesian=m.embedding), dy.compose(cartesian=m.embedding)
        for name, X in (("xi4", m.xi4), ("xi5", m.xi5)):
            out[f"wheel{i}/{name}"] = X.apply(wx_) * dy_ - X.apply(wy_) * dx_
    return out


@dataclass
class GrowthCheck:
    symbolic: tuple[int, ...]
    numeric_fraction: float
    numeric_counts: dict
    frame_determinant: TrigExpr
    determinant_small_fraction: float
    determinant_at_sample: float


def frame_determinant(m: SnakeModel) -> TrigExpr:
    return determinant([list(X.comps) for X in m.frame])


def check_growth(m: SnakeModel, n_points: int = 200, seed: int = 0, threshold: float = 1e-8) -> GrowthCheck:
    params = m.params.floats() if m.params.is_numeric else {"s1": 1.3, "s2": 0.4, "s3": 0.8}
    g = growth_vector(m.distribution, 3, n_points=n_points, seed=seed, threshold=threshold, params=params)
    if g.symbolic != (2, 3, 5):
        raise ModelError(f"generic growth vector is {g.symbolic}, expected (2, 3, 5)")
    det = frame_determinant(m)
    from .symexpr.numeric import CompiledExprs

    c = CompiledExprs([det], M_CHART.names, params)
    rng = np.random.default_rng(seed + 1)
    pts = M_CHART.sample(rng, max(n_points, 1))
    vals = np.abs(np.array([c(p)[0] for p in pts]))
    return GrowthCheck(g.symbolic, g.numeric_fraction, g.numeric_counts, det, float(np.mean(vals < 1e-6)), float(vals[0]))


@dataclass
class SymmetryCheck:
    holds: dict[str, bool]
    coefficients: dict[str, tuple[TrigExpr, TrigExpr]]

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())


def span_coefficients(m: SnakeModel, V: VectorField) -> tuple[TrigExpr, TrigExpr, bool]:
    """Coefficients (a, b) with V = a xi4 + b xi5 and whether that is exact."""
    a = pair(KForm.one_form(M_CHART, {"theta": ONE_EXPR}), V) / pair(KForm.one_form(M_CHART, {"theta": ONE_EXPR}), m.xi4)
    dual5 = KForm.one_form(M_CHART, {"x": TrigExpr.cos(theta=1), "y": TrigExpr.sin(theta=1)})
    b = pair(dual5, V - m.xi4.scale(a))
    norm5 = pair(dual5, m.xi5)
    if not norm5.is_constant():
        raise ModelError("xi5 is not normalised along the segment")
    b = b / norm5
    resid = V - m.xi4.scale(a) - m.xi5.scale(b)
    return a, b, resid.is_zero()


def check_symmetries(m: SnakeModel) -> SymmetryCheck:
    holds, coeffs = {}, {}
    for i, S in enumerate(m.symmetries, start=1):
        for name, X in (("xi4", m.xi4), ("xi5", m.xi5)):
            key = f"[varsigma{i},{name}]"
            a, b, ok = span_coefficients(m, lie_bracket(S, X))
            holds[key] = ok
            coeffs[key] = (a, b)
    return SymmetryCheck(holds, coeffs)
