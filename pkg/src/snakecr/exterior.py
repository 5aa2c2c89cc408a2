"""Vector fields, differential forms and growth vectors over a coordinate chart.

All objects carry :class:`TrigExpr` coefficients, so brackets, exterior
derivatives and pairings are exact.  Complex-valued objects are handled as
(real, imaginary) pairs by the layers above.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .symexpr import VARIABLES, ZERO_EXPR, TrigExpr, combine
from .symexpr.numeric import CompiledExprs
from .symexpr.trig import ANGLES


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names; all objects on a chart index into this order."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ChartError(f"duplicate coordinates in chart {self.names}")
        bad = [n for n in self.names if n not in VARIABLES]
        if bad:
            raise ChartError(f"unknown coordinates {bad}")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def check(self, e: TrigExpr, what: str = "expression"):
        extra = set(e.variables()) - set(self.names)
        if extra:
            raise ChartError(f"{what} uses {sorted(extra)} outside chart {self.names}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Angles uniform in [0, 2 pi), other coordinates uniform in [-1, 1]."""
        pts = np.empty((n, self.dim))
        for j, name in enumerate(self.names):
            if name in ANGLES:
                pts[:, j] = rng.uniform(0.0, 2 * np.pi, n)
            else:
                pts[:, j] = rng.uniform(-1.0, 1.0, n)
        return pts


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartError(f"chart mismatch: {a.chart.names} vs {b.chart.names}")


class VectorField:
    """Vector field sum_i X^i d/d(name_i) on a chart."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Sequence[TrigExpr]):
        if len(comps) != chart.dim:
            raise ChartError(f"expected {chart.dim} components, got {len(comps)}")
        comps = tuple(c if isinstance(c, TrigExpr) else TrigExpr.const(c) for c in comps)
        for c in comps:
            chart.check(c, "vector field component")
        self.chart = chart
        self.comps = comps

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, TrigExpr]) -> "VectorField":
        unknown = set(comps) - set(chart.names)
        if unknown:
            raise ChartError(f"components {sorted(unknown)} not in chart")
        return cls(chart, [comps.get(n, ZERO_EXPR) for n in chart.names])

    def __getitem__(self, name: str) -> TrigExpr:
        return self.comps[self.chart.index(name)]

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.comps])

    def scale(self, f) -> "VectorField":
        return VectorField(self.chart, [a * f for a in self.comps])

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.chart == other.chart and self.comps == other.comps

    def __hash__(self):
        return hash((self.chart, self.comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def apply(self, f: TrigExpr) -> TrigExpr:
        """Directional derivative X(f)."""
        return combine(c * f.diff(n) for n, c in zip(self.chart.names, self.comps) if not c.is_zero())

    def compile(self, params: Mapping | None = None) -> CompiledExprs:
        return CompiledExprs(self.comps, self.chart.names, params)

    def __repr__(self):
        parts = [f"({c})*d/d{n}" for n, c in zip(self.chart.names, self.comps) if not c.is_zero()]
        return "VectorField(" + " + ".join(parts or ["0"]) + ")"


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^i = X(Y^i) - Y(X^i)."""
    _same_chart(X, Y)
    return VectorField(X.chart, [X.apply(b) - Y.apply(a) for a, b in zip(X.comps, Y.comps)])


def _sort_sign(idx: Sequence[int]):
    """Sort an index tuple, returning (sign, sorted) or (0, None) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class KForm:
    """Differential k-form sum_I f_I dx^I with increasing multi-indices I."""

    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping[tuple[int, ...], TrigExpr] | None = None):
        self.chart = chart
        self.degree = degree
        clean = {}
        for idx, f in (coeffs or {}).items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not match degree {degree}")
            sign, key = _sort_sign(idx)
            if sign == 0 or f.is_zero():
                continue
            chart.check(f, "form coefficient")
            f = f if sign > 0 else -f
            clean[key] = clean[key] + f if key in clean else f
        self.coeffs = {k: v for k, v in clean.items() if not v.is_zero()}

    @classmethod
    def one_form(cls, chart: Chart, comps: Mapping[str, TrigExpr]) -> "KForm":
        return cls(chart, 1, {(chart.index(n),): f for n, f in comps.items()})

    @classmethod
    def function(cls, chart: Chart, f: TrigExpr) -> "KForm":
        return cls(chart, 0, {(): f})

    def coeff(self, *names: str) -> TrigExpr:
        idx = [self.chart.index(n) for n in names]
        sign, key = _sort_sign(idx)
        if sign == 0:
            return ZERO_EXPR
        f = self.coeffs.get(key, ZERO_EXPR)
        return f if sign > 0 else -f

    def __add__(self, other: "KForm") -> "KForm":
        _same_chart(self, other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return KForm(self.chart, self.degree, out)

    def __neg__(self):
        return KForm(self.chart, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scale(self, f) -> "KForm":
        return KForm(self.chart, self.degree, {k: v * f for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, KForm)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.chart, self.degree, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        parts = []
        for idx, f in sorted(self.coeffs.items()):
            parts.append(f"({f})" + "".join(f"*d{self.chart.names[i]}" for i in idx))
        return f"KForm[{self.degree}](" + " + ".join(parts or ["0"]) + ")"


def wedge(a: KForm, b: KForm) -> KForm:
    _same_chart(a, b)
    out: dict = {}
    for ia, fa in a.coeffs.items():
        for ib, fb in b.coeffs.items():
            sign, key = _sort_sign(ia + ib)
            if sign == 0:
                continue
            term = fa * fb
            term = term if sign > 0 else -term
            out[key] = out[key] + term if key in out else term
    return KForm(a.chart, a.degree + b.degree, out)


def ext_d(a: KForm) -> KForm:
    """Exterior derivative."""
    out: dict = {}
    for idx, f in a.coeffs.items():
        for j, name in enumerate(a.chart.names):
            df = f.diff(name)
            if df.is_zero():
                continue
            sign, key = _sort_sign((j,) + idx)
            if sign == 0:
                continue
            term = df if sign > 0 else -df
            out[key] = out[key] + term if key in out else term
    return KForm(a.chart, a.degree + 1, out)


def pair(form: KForm, *fields: VectorField) -> TrigExpr:
    """Evaluate a k-form on k vector fields.

    Uses the determinant convention, so (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X).
    """
    if len(fields) != form.degree:
        raise ValueError(f"{form.degree}-form needs {form.degree} vector fields")
    for X in fields:
        _same_chart(form, X)
    if form.degree == 0:
        return form.coeffs.get((), ZERO_EXPR)
    terms = []
    for idx, f in form.coeffs.items():
        rows = [[X.comps[i] for X in fields] for i in idx]
        terms.append(f * determinant(rows))
    return combine(terms)


def differential(chart: Chart, f: TrigExpr) -> KForm:
    return ext_d(KForm.function(chart, f))


# ---------------------------------------------------------------------------
# exact linear algebra over the trig-polynomial ring


def determinant(rows: Sequence[Sequence[TrigExpr]]) -> TrigExpr:
    """Exact determinant via Laplace expansion over column subsets."""
    n = len(rows)
    if n == 0:
        return TrigExpr.const(1)
    # minors[mask] = det of the first popcount(mask) rows restricted to mask columns
    minors = {0: TrigExpr.const(1)}
    for r in range(n):
        nxt = {}
        for mask, m in minors.items():
            if m.is_zero():
                continue
            for c in range(n):
                if mask >> c & 1:
                    continue
                a = rows[r][c]
                if a.is_zero():
                    continue
                # sign from the number of used columns greater than c
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = a * m if sign > 0 else -(a * m)
                key = mask | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << n) - 1, ZERO_EXPR)


def symbolic_rank(vectors: Sequence[Sequence[TrigExpr]]) -> tuple[int, list[int]]:
    """Generic rank over the function field and the indices of a basis.

    Division-free elimination in the trig-polynomial ring, which is an
    integral domain, so zero tests are exact.
    """
    rows = [list(v) for v in vectors]
    basis: list[int] = []
    reduced: list[tuple[int, list[TrigExpr]]] = []  # (pivot column, row)
    for i, row in enumerate(rows):
        r = row
        for col, piv in reduced:
            a = r[col]
            if a.is_zero():
                continue
            p = piv[col]
            r = [p * x - a * y for x, y in zip(r, piv)]
        nz = [j for j, x in enumerate(r) if not x.is_zero()]
        if nz:
            col = min(nz, key=lambda j: len(r[j]))
            reduced.append((col, r))
            basis.append(i)
    return len(basis), basis


def numeric_rank(mat: np.ndarray, threshold: float = 1e-8) -> int:
    s = np.linalg.svd(np.atleast_2d(mat), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > threshold * max(1.0, s[0])))


# ---------------------------------------------------------------------------
# distributions and growth


@dataclass
class Distribution:
    """Span of generator vector fields on a chart."""

    chart: Chart
    generators: tuple[VectorField, ...]

    def __post_init__(self):
        self.generators = tuple(self.generators)
        for g in self.generators:
            if g.chart != self.chart:
                raise ChartError("generator on a different chart")


@dataclass
class GrowthResult:
    symbolic: tuple[int, ...]
    numeric_fraction: float
    numeric_counts: dict = field(default_factory=dict)
    flagged_points: list = field(default_factory=list)
    levels: list = field(default_factory=list)

    @property
    def numeric_growth(self) -> tuple[int, ...] | None:
        if not self.numeric_counts:
            return None
        return max(self.numeric_counts.items(), key=lambda kv: kv[1])[0]


def filtration(D: Distribution, max_depth: int) -> list[list[VectorField]]:
    """Generators of D = D_1 c D_2 c ... with D_{k+1} = D_k + [D_1, D_k].

    Each level keeps a symbolically independent set of generators.
    """
    comps = lambda X: list(X.comps)
    rank, idx = symbolic_rank([comps(g) for g in D.generators])
    level = [D.generators[i] for i in idx]
    levels = [list(level)]
    newest = list(level)
    for _ in range(max_depth - 1):
        if len(levels[-1]) == D.chart.dim:
            break
        candidates = list(levels[-1])
        for X in levels[0]:
            for Y in newest:
                B = lie_bracket(X, Y)
                if not B.is_zero():
                    candidates.append(B)
        rank, idx = symbolic_rank([comps(c) for c in candidates])
        nxt = [candidates[i] for i in idx]
        newest = [c for c in nxt if c not in levels[-1]]
        levels.append(nxt)
        if not newest:
            break
    return levels


def growth_vector(
    D: Distribution,
    max_depth: int = 3,
    n_points: int = 200,
    seed: int = 0,
    threshold: float = 1e-8,
    params: Mapping | None = None,
) -> GrowthResult:
    """Symbolic growth vector plus its numeric confirmation at sample points."""
    levels = filtration(D, max_depth)
    symbolic = tuple(len(l) for l in levels)
    counts: dict = {}
    flagged = []
    ok = 0
    if n_points:
        rng = np.random.default_rng(seed)
        pts = D.chart.sample(rng, n_points)
        compiled = [[X.compile(params) for X in lvl] for lvl in levels]
        for p in pts:
            ranks = tuple(numeric_rank(np.array([c(p) for c in lvl]), threshold) for lvl in compiled)
            counts[ranks] = counts.get(ranks, 0) + 1
            if ranks == symbolic:
                ok += 1
            else:
                flagged.append((p.tolist(), ranks))
    frac = ok / n_points if n_points else 1.0
    return GrowthResult(symbolic, frac, counts, flagged, levels)
