"""Coframe normalization for the CR structure and its invariants.

The pointwise pipeline works with Taylor jets at each sample point:

1. Z is the (1,0) vector dual to the fourth form of the adapted coframe.
2. A bracket frame e = (-iU2, -iU1, iW, Z, Zbar) is built from
   W = [Z, Zbar], U1 = [W, Z], U2 = [W, Zbar]; its dual coframe theta
   already has the required first structure equation up to group terms.
3. The remaining lower-triangular group parameters are fixed stage by
   stage; the last stage is affine in (g2, g4) and is solved exactly.
4. Invariants are read off the structure functions.  The leftover
   connection coefficient c1 is a gauge choice (see ``GAUGES``).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
import sympy

from .cr_structure import AdaptedCoframe, ComplexForm
from .exterior import Chart, VectorField, lie_bracket
from .jets import JetEvaluator, JetSpace, jet_space
from .snake_model import M_CHART, SnakeModel
from .symexpr import RationalPoint, eval_exact
from .symexpr.trig import is_angle

INVARIANT_NAMES = ("J", "T", "S", "L", "Q", "G", "V", "N", "K", "F", "B", "A")
VANISHING = ("J", "N", "L", "F")
GAUGES = ("balanced", "absorb_F", "absorb_S", "section")
SCALES = ("unit_T", "none")
VANISH_TOL = 1e-6
NONVANISH_TOL = 1e-3

# index map of complex conjugation on the coframe: w1 <-> w2, w4 <-> w5
_CONJ = (1, 0, 2, 4, 3)


class EquivalenceError(ValueError):
    """Normalization or symbol computation failed."""


# ---------------------------------------------------------------------------
# structure group


def _diag_corrected(g1, g1b):
    return (g1 * g1b**2, g1**2 * g1b, g1 * g1b, g1, g1b)


def _diag_printed(g1, g1b):
    return (g1 * g1b**2, g1**2 * g1b, g1 * g1b, g1b, g1)


H_PATTERNS: dict[str, Callable] = {"corrected": _diag_corrected, "printed": _diag_printed}


def h_matrix(g, gb, pattern: str = "corrected"):
    """Lower-triangular group matrix from parameters g1..g5 and conjugates.

    Works for any scalar type (numbers, jets, sympy symbols).  ``g`` and
    ``gb`` are length-5 sequences.
    """
    d = H_PATTERNS[pattern](g[0], gb[0])
    z = 0 * g[0]
    return [
        [d[0], z, z, z, z],
        [z, d[1], z, z, z],
        [gb[2], g[2], d[2], z, z],
        [gb[4], g[3], gb[1], d[3], z],
        [gb[3], g[4], g[1], z, d[4]],
    ]


def hj_matrix(g1, g1b, g2, g2b, pattern: str = "corrected"):
    """Matrix of the two-parameter subgroup fixing the third column freedom."""
    d = H_PATTERNS[pattern](g1, g1b)
    z = 0 * g1
    return [
        [d[0], z, z, z, z],
        [z, d[1], z, z, z],
        [z, z, d[2], z, z],
        [z, z, g2, d[3], z],
        [z, z, g2b, z, d[4]],
    ]


@dataclass(frozen=True)
class HGroupElement:
    """Element of the structure group with complex parameters g1..g5."""

    g1: complex = 1
    g2: complex = 0
    g3: complex = 0
    g4: complex = 0
    g5: complex = 0
    pattern: str = "corrected"

    def __post_init__(self):
        if self.g1 == 0:
            raise EquivalenceError("g1 must be nonzero")
        if self.pattern not in H_PATTERNS:
            raise EquivalenceError(f"unknown pattern {self.pattern!r}")

    @property
    def params(self) -> tuple[complex, ...]:
        return (self.g1, self.g2, self.g3, self.g4, self.g5)

    def matrix(self) -> np.ndarray:
        g = [complex(x) for x in self.params]
        return np.array(h_matrix(g, [x.conjugate() for x in g], self.pattern), dtype=complex)

    @classmethod
    def from_matrix(cls, M: np.ndarray, pattern: str = "corrected", tol: float = 1e-12) -> "HGroupElement":
        g1 = M[3, 3] if pattern == "corrected" else M[4, 4]
        h = cls(g1, M[4, 2], M[2, 1], M[3, 1], M[4, 1], pattern)
        if np.max(np.abs(h.matrix() - M)) > tol * max(1.0, np.max(np.abs(M))):
            raise EquivalenceError("matrix does not have the group pattern")
        return h

    def __matmul__(self, other: "HGroupElement") -> "HGroupElement":
        return HGroupElement.from_matrix(self.matrix() @ other.matrix(), self.pattern)

    def inverse(self) -> "HGroupElement":
        return HGroupElement.from_matrix(np.linalg.inv(self.matrix()), self.pattern)


@dataclass(frozen=True)
class HJGroupElement:
    g1: complex = 1
    g2: complex = 0
    pattern: str = "corrected"

    def __post_init__(self):
        if self.g1 == 0:
            raise EquivalenceError("g1 must be nonzero")

    def matrix(self) -> np.ndarray:
        g1, g2 = complex(self.g1), complex(self.g2)
        return np.array(hj_matrix(g1, g1.conjugate(), g2, g2.conjugate(), self.pattern), dtype=complex)

    def as_h(self) -> HGroupElement:
        # the subgroup writes g2 where the full group writes its conjugate
        return HGroupElement(self.g1, complex(self.g2).conjugate(), 0, 0, 0, self.pattern)


def _sym_conj(expr, pairs):
    return expr.xreplace({a: b for a, b in pairs} | {b: a for a, b in pairs})


def pattern_closed(pattern: str = "corrected", subgroup: bool = False) -> bool:
    """Symbolic check that products and inverses keep the matrix pattern.

    Parameters and their conjugates are independent symbols; conjugation
    swaps them.
    """
    n = 2 if subgroup else 5
    a = sympy.symbols(f"a1:{n + 1}")
    ab = sympy.symbols(f"ab1:{n + 1}")
    b = sympy.symbols(f"b1:{n + 1}")
    bb = sympy.symbols(f"bb1:{n + 1}")
    pairs = list(zip(a + b, ab + bb))

    def mat(g, gbar):
        if subgroup:
            return sympy.Matrix(hj_matrix(g[0], gbar[0], g[1], gbar[1], pattern))
        return sympy.Matrix(h_matrix(list(g), list(gbar), pattern))

    def fits(M):
        # read parameters off the defining entries, then rebuild
        if subgroup:
            g1 = M[3, 3] if pattern == "corrected" else M[4, 4]
            g = [g1, M[3, 2]]
        else:
            g1 = M[3, 3] if pattern == "corrected" else M[4, 4]
            g = [g1, M[4, 2], M[2, 1], M[3, 1], M[4, 1]]
        gbar = [_sym_conj(x, pairs) for x in g]
        R = mat(g, gbar) - M
        return all(sympy.simplify(sympy.expand(x)) == 0 for x in R)

    A = mat(a, ab)
    B = mat(b, bb)
    if not fits(A * B):
        return False
    return fits(sympy.simplify(A.inv()))


def h_action(h: HGroupElement, c: AdaptedCoframe) -> AdaptedCoframe:
    """omega^i = h^i_j omega~^j with exact coefficients.

    The real and imaginary parts of each g must be exactly representable
    (they are converted with ``Fraction``).
    """
    M = h.matrix()
    if abs(np.linalg.det(M)) == 0:
        raise EquivalenceError("singular group element")
    forms = []
    for i in range(5):
        re = im = None
        for j in range(5):
            hr, hi = Fraction(M[i, j].real), Fraction(M[i, j].imag)
            if hr == 0 and hi == 0:
                continue
            f = c.forms[j]
            r = f.re.scale(hr) - f.im.scale(hi)
            s = f.re.scale(hi) + f.im.scale(hr)
            re = r if re is None else re + r
            im = s if im is None else im + s
        forms.append(ComplexForm(re, im))
    return AdaptedCoframe(tuple(forms))


# ---------------------------------------------------------------------------
# nilpotent symbol

N_RELATIONS = {(0, 1): 2, (0, 2): 3, (1, 2): 4}
WEIGHTS = (1, 1, 2, 3, 3)


@dataclass
class NilpotentSymbol:
    """Graded structure constants at a point.

    ``constants[(i, j)]`` lists the coefficients of [e_i, e_j] in the
    normalized graded basis; ``change_of_basis`` has the normalized basis
    vectors as columns in chart coordinates.
    """

    raw: dict
    constants: dict
    change_of_basis: list
    matches: bool

    def as_json(self) -> dict:
        fmt = lambda v: [str(x) for x in v]  # noqa: E731
        return {
            "raw": {f"{i + 1},{j + 1}": fmt(v) for (i, j), v in sorted(self.raw.items())},
            "constants": {f"{i + 1},{j + 1}": fmt(v) for (i, j), v in sorted(self.constants.items())},
            "change_of_basis": [fmt(r) for r in self.change_of_basis],
            "matches_n": self.matches,
        }


def _fsolve(cols: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    """Exact coordinates of v in the basis given by ``cols``."""
    n = len(cols)
    M = [[cols[j][i] for j in range(n)] + [v[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise EquivalenceError("basis is singular")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _frank(vectors: list[list[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank, col = 0, 0
    ncol = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncol:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def nilpotent_symbol(
    generators: Sequence[VectorField], q: RationalPoint, params: Mapping | None = None
) -> NilpotentSymbol:
    """Graded nilpotent symbol of span(generators) at q, normalized to the 5-dim model.

    Raises ``EquivalenceError`` when the growth at q is not (2,3,5).
    """
    X1, X2 = generators
    chart = X1.chart
    X3 = lie_bracket(X1, X2)
    X4 = lie_bracket(X1, X3)
    X5 = lie_bracket(X2, X3)

    def at(X):
        return [eval_exact(c, q, params) for c in X.comps]

    v = [at(X) for X in (X1, X2, X3)]
    b13, b23 = at(X4), at(X5)
    if chart.dim != 5 or _frank(v[:2]) != 2 or _frank(v) != 3 or _frank(v + [b13, b23]) != 5:
        raise EquivalenceError("growth at the point is not (2,3,5)")
    # complete v1, v2, v3 with coordinate vectors
    basis = list(v)
    for i in range(chart.dim):
        if len(basis) == 5:
            break
        unit = [Fraction(int(i == k)) for k in range(chart.dim)]
        if _frank(basis + [unit]) == len(basis) + 1:
            basis.append(unit)

    def graded(vec, weight):
        coords = _fsolve(basis, vec)
        return [c if WEIGHTS[k] == weight else Fraction(0) for k, c in enumerate(coords)]

    zero = [Fraction(0)] * 5
    raw = {(i, j): list(zero) for i in range(5) for j in range(i + 1, 5)}
    raw[(0, 1)] = graded(v[2], 2)
    raw[(0, 2)] = graded(b13, 3)
    raw[(1, 2)] = graded(b23, 3)

    # normalized basis: e3 = [e1,e2], e4 = [e1,e3], e5 = [e2,e3] in the graded algebra
    def bracket_coords(x, y):
        out = list(zero)
        for a in range(5):
            for b in range(5):
                if x[a] == 0 or y[b] == 0 or a == b:
                    continue
                key, sgn = ((a, b), 1) if a < b else ((b, a), -1)
                for k in range(5):
                    out[k] += sgn * x[a] * y[b] * raw[key][k]
        return out

    P = [[Fraction(int(i == k)) for k in range(5)] for i in range(2)]
    P.append(bracket_coords(P[0], P[1]))
    P.append(bracket_coords(P[0], P[2]))
    P.append(bracket_coords(P[1], P[2]))
    if _frank(P) != 5:
        raise EquivalenceError("graded brackets are degenerate")
    consts = {}
    for i in range(5):
        for j in range(i + 1, 5):
            consts[(i, j)] = _fsolve(P, bracket_coords(P[i], P[j]))
    matches = all(
        consts[key] == [Fraction(int(k == N_RELATIONS.get(key, -1))) for k in range(5)] for key in consts
    )
    # normalized basis vectors in chart coordinates
    cob = [[sum(P[j][a] * basis[a][i] for a in range(5)) for j in range(5)] for i in range(5)]
    return NilpotentSymbol(raw, consts, cob, matches)


def rational_points(chart: Chart, n: int, seed: int = 0) -> list[RationalPoint]:
    """Seeded points with small rational coordinates and rational-trig angles."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        cart, tans = {}, {}
        for name in chart.names:
            num, den = int(rng.integers(-9, 10)), int(rng.integers(1, 10))
            if is_angle(name):
                tans[name] = Fraction(num, den)
            else:
                cart[name] = Fraction(num, den)
        pts.append(RationalPoint(cart, tans))
    return pts


def model_symbol(m: SnakeModel, q: RationalPoint, scale: Sequence[int] = (1, 1)) -> NilpotentSymbol:
    """Symbol of the snake distribution with generators (xi5, xi4), optionally rescaled."""
    return nilpotent_symbol((m.xi5.scale(scale[0]), m.xi4.scale(scale[1])), q, m.params.values())


# ---------------------------------------------------------------------------
# pointwise normalization


def _structure(S: JetSpace, om: np.ndarray, f: np.ndarray) -> np.ndarray:
    """C[i, j, k] = d omega^i (f_j, f_k) = -omega^i([f_j, f_k])."""
    C = np.zeros((5, 5, 5, S.size), dtype=complex)
    for j in range(5):
        for k in range(j + 1, 5):
            b = S.bracket(f[:, j], f[:, k])
            for i in range(5):
                C[i, j, k] = -S.dot(om[i], b)
                C[i, k, j] = -C[i, j, k]
    return C


def _hjets(S: JetSpace, g2, g3, g4, g5) -> np.ndarray:
    one = S.const(1.0)
    g = [one, g2, g3, g4, g5]
    return np.array(h_matrix(g, [np.conj(x) for x in g]))


def _connection(C) -> list:
    """c1..c5 with c1 left at zero; c_k = -d omega^1 [1k]."""
    return [0 * C[0][0, 0]] + [-C[0][0, k] for k in range(1, 5)]


def _conditions(C) -> list:
    c = _connection(C)
    cj = np.conj
    return [
        C[2][0, 3],
        C[2][2, 3] + (c[3] + cj(c[4])) / 3,
        C[3][3, 4] - (c[4] / 3 - 2 * cj(c[3]) / 3),
    ]


def _affine_solve(S: JetSpace, evaluate: Callable, nunk: int):
    """Solve conditions that are affine in ``nunk`` complex unknowns.

    ``evaluate(values)`` returns a list of condition jets for constant
    unknown values.  Least squares over the real and imaginary parts.
    """
    base = evaluate([0] * nunk)
    cols = []
    for k in range(nunk):
        for unit in (1, 1j):
            vals = [0] * nunk
            vals[k] = unit
            cols.append([r - b for r, b in zip(evaluate(vals), base)])
    rows, rhs = [], []
    for q in range(len(base)):
        for part in (np.real, np.imag):
            rows.append([part(col[q]).astype(complex) for col in cols])
            rhs.append(-part(base[q]).astype(complex))
    n = len(cols)
    AtA = np.array([[sum(S.mul(r[i], r[j]) for r in rows) for j in range(n)] for i in range(n)])
    Atb = np.array([sum(S.mul(r[i], b) for r, b in zip(rows, rhs)) for i in range(n)])
    x = S.matmul(S.inv(AtA), Atb[:, None, :])[:, 0]
    return [x[2 * k] + 1j * x[2 * k + 1] for k in range(nunk)]


def _gauge_c1(gauge: str, S0, F0):
    cj = np.conj
    if gauge == "balanced":
        return (3 * S0 - 6 * cj(F0)) / 5
    if gauge == "absorb_F":
        return -1.5 * cj(F0)
    if gauge == "absorb_S":
        return 3 * S0
    if gauge == "section":
        return 0 * S0
    raise EquivalenceError(f"unknown gauge {gauge!r}")


def _extract(S: JetSpace, C, gauge: str) -> tuple[dict, list]:
    cj = np.conj
    c = _connection(C)
    w1, w3, w4 = C[0], C[2], C[3]
    S0 = w3[0, 2] - cj(c[1]) / 3
    F0 = -w4[1, 3] - c[1] / 3
    c[0] = _gauge_c1(gauge, S0, F0)
    inv = {
        "J": w1[1, 3],
        "T": -1j * w3[0, 1],
        "S": S0 - c[0] / 3,
        "L": w3[0, 4],
        "Q": w4[0, 1],
        "G": w4[0, 2],
        "V": -w4[2, 4],
        "N": -w4[0, 4],
        "K": w4[1, 2],
        "F": F0 + 2 * cj(c[0]) / 3,
        "B": w4[1, 4],
        "A": 1j * (w4[2, 3] + c[2] / 3 - 2 * cj(c[2]) / 3),
    }
    return inv, c


def target_structure(inv: Mapping, c: Sequence, S: JetSpace | None = None, jv_sign: int = 1):
    """Right-hand sides of the normal-form structure equations.

    Returns T[i][j, k] (0-based, j < k filled, antisymmetric) as a nested
    list.  Entries are jets when ``S`` is given, scalars otherwise.
    ``jv_sign = 1`` uses the d^2-consistent -(S + conj(J V)) term in
    d omega^4; ``-1`` uses -(S - conj(J V)).
    """
    cj = np.conj
    z = 0 * inv["J"]
    one = S.const(1.0) if S is not None else 1.0
    mul = S.mul if S is not None else (lambda a, b: a * b)
    T = [[[z for _ in range(5)] for _ in range(5)] for _ in range(5)]

    def put(i, j, k, v):
        T[i][j][k] = v
        T[i][k][j] = -v

    for k in range(1, 5):
        put(0, 0, k, -c[k])
    put(0, 1, 3, inv["J"])
    put(0, 2, 4, one)
    put(2, 0, 1, 1j * inv["T"])
    put(2, 0, 2, inv["S"] + (c[0] + cj(c[1])) / 3)
    put(2, 0, 4, inv["L"])
    put(2, 1, 2, cj(inv["S"]) + (c[1] + cj(c[0])) / 3)
    put(2, 1, 3, cj(inv["L"]))
    put(2, 2, 3, -(c[3] + cj(c[4])) / 3)
    put(2, 2, 4, -(c[4] + cj(c[3])) / 3)
    put(2, 3, 4, 1j * one)
    jv = mul(cj(inv["J"]), cj(inv["V"]))
    put(3, 0, 1, inv["Q"])
    put(3, 0, 2, inv["G"])
    put(3, 0, 3, -(inv["S"] + jv_sign * jv) - c[0] / 3 + 2 * cj(c[1]) / 3)
    put(3, 0, 4, -inv["N"])
    put(3, 1, 2, inv["K"])
    put(3, 1, 3, -inv["F"] - c[1] / 3 + 2 * cj(c[0]) / 3)
    put(3, 1, 4, inv["B"])
    put(3, 2, 3, -1j * inv["A"] - c[2] / 3 + 2 * cj(c[2]) / 3)
    put(3, 2, 4, -inv["V"])
    put(3, 3, 4, c[4] / 3 - 2 * cj(c[3]) / 3)
    for i, src in ((1, 0), (4, 3)):
        for j in range(5):
            for k in range(5):
                T[i][j][k] = cj(T[src][_CONJ[j]][_CONJ[k]])
    return T


@dataclass
class PointNormalization:
    """Normalization at one sample point (values at the point plus jets)."""

    point: np.ndarray
    invariants: dict[str, complex]
    connection: tuple[complex, ...]
    group: dict[str, complex]
    coframe: np.ndarray
    residual: float
    jets: dict = field(repr=False, default_factory=dict)


def coframe_exprs(c: AdaptedCoframe):
    return c.matrix_exprs()


def normalize_point(
    exprs,
    params: Mapping[str, float],
    point,
    order: int = 6,
    gauge: str = "balanced",
    jv_sign: int = 1,
    deformation: float = 0.0,
    chart: Sequence[str] = M_CHART.names,
    z_scale: float = 1.0,
) -> PointNormalization:
    """Normalize the coframe given by ``exprs`` (rows of (re, im) pairs) at ``point``."""
    if order < 6:
        raise EquivalenceError("jet order must be at least 6")
    S = jet_space(5, order)
    ev = JetEvaluator(S, chart, point, params)
    Th = np.array([[ev(re) + 1j * ev(im) for re, im in row] for row in exprs])
    if np.linalg.cond(Th[:, :, 0]) > 1e12:
        raise EquivalenceError("coframe is degenerate at the point")
    ftil = S.inv(Th)
    Z = ftil[:, 3].copy()
    if deformation:
        x, y, ph = ev.vars[chart[0]], ev.vars[chart[1]], ev.vars[chart[3]]
        sx, cx = S.sincos(x)
        sy, _ = S.sincos(y)
        _, cph = S.sincos(ph)
        Z[3] = Z[3] + deformation * (cx + 1j * sy)
        Z[4] = Z[4] + deformation * 1j * S.mul(sx, cph)
    Z = z_scale * Z
    Zb = np.conj(Z)
    W = S.bracket(Z, Zb)
    U1 = S.bracket(W, Z)
    U2 = S.bracket(W, Zb)
    e = np.stack([-1j * U2, -1j * U1, 1j * W, Z, Zb], 1)
    if np.linalg.cond(e[:, :, 0]) > 1e12:
        raise EquivalenceError("bracket frame is degenerate at the point")
    theta = S.inv(e)
    a = _structure(S, theta, e)[0]

    def stage(g2, g4):
        g3 = a[1, 4]
        g5 = S.mul(a[1, 3], np.conj(g2)) + S.mul(a[1, 4], g2) - a[1, 2]
        h = _hjets(S, g2, g3, g4, g5)
        om = S.matmul(h, theta)
        f = S.inv(om)
        return om, f, _structure(S, om, f), (g3, g5)

    g2, g4 = _affine_solve(S, lambda v: _conditions(stage(S.const(v[0]), S.const(v[1]))[2]), 2)
    om, f, C, (g3, g5) = stage(g2, g4)
    inv, c = _extract(S, C, gauge)
    T = target_structure(inv, c, S, jv_sign)
    residual = max(abs(C[i][j, k][0] - T[i][j][k][0]) for i in range(5) for j in range(5) for k in range(j + 1, 5))
    return PointNormalization(
        point=np.asarray(point, dtype=float),
        invariants={k: complex(v[0]) for k, v in inv.items()},
        connection=tuple(complex(x[0]) for x in c),
        group={"g2": complex(g2[0]), "g3": complex(g3[0]), "g4": complex(g4[0]), "g5": complex(g5[0])},
        coframe=om[:, :, 0].copy(),
        residual=float(residual),
        jets={"S": S, "om": om, "f": f, "C": C, "inv": inv, "c": c, "T": T, "theta": Th},
    )


@dataclass
class InvariantSet:
    """Invariant values over a sample set."""

    points: np.ndarray
    values: dict[str, np.ndarray]
    connection: np.ndarray
    residuals: np.ndarray
    gauge: str
    mode: str
    scale: str = "unit_T"

    @property
    def residual(self) -> float:
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    def max_abs(self, name: str) -> float:
        return float(np.max(np.abs(self.values[name])))

    def pattern(self, vanish: float = VANISH_TOL, nonvanish: float = NONVANISH_TOL) -> dict[str, str]:
        out = {}
        for n in INVARIANT_NAMES:
            m = self.max_abs(n)
            out[n] = "vanishing" if m < vanish else "non-vanishing" if m > nonvanish else "indeterminate"
        return out

    def max_imag_T(self) -> float:
        return float(np.max(np.abs(self.values["T"].imag)))


@dataclass
class NormalizationResult:
    coframes: list[np.ndarray]
    omega1: np.ndarray
    invariants: InvariantSet
    points: list[PointNormalization]
    warnings: list[str] = field(default_factory=list)


def normalize_coframe(
    c: AdaptedCoframe,
    params: Mapping[str, float],
    points: Sequence,
    mode: str = "pointwise",
    gauge: str = "balanced",
    order: int = 6,
    jv_sign: int = 1,
    deformation: float = 0.0,
    scale: str = "unit_T",
) -> NormalizationResult:
    """Normalize an adapted coframe at each sample point.

    With ``scale="unit_T"`` the modulus of the remaining C* freedom is
    fixed by rescaling Z with a constant so that |T| = 1 at each point;
    this keeps all invariants of order one.  ``"none"`` keeps Z dual to
    the fourth form of the input coframe.

    Symbolic mode would need division of trigonometric expressions, which
    the expression layer does not provide; it falls back to pointwise with
    a warning.
    """
    notes = []
    if mode == "symbolic":
        msg = "symbolic normalization does not close; falling back to pointwise"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    elif mode != "pointwise":
        raise EquivalenceError(f"unknown mode {mode!r}")
    if scale not in SCALES:
        raise EquivalenceError(f"unknown scale {scale!r}")
    exprs = c.matrix_exprs()
    res = []
    for p in points:
        r = normalize_point(exprs, params, p, order, gauge, jv_sign, deformation)
        t = abs(r.invariants["T"])
        if scale == "unit_T" and t > 1e-12:
            # T has weight |lambda|^4 under Z -> lambda Z
            r = normalize_point(exprs, params, p, order, gauge, jv_sign, deformation, z_scale=t**-0.25)
        res.append(r)
    vals = {n: np.array([r.invariants[n] for r in res]) for n in INVARIANT_NAMES}
    inv = InvariantSet(
        points=np.array([r.point for r in res]),
        values=vals,
        connection=np.array([r.connection for r in res]),
        residuals=np.array([r.residual for r in res]),
        gauge=gauge,
        mode="pointwise",
        scale=scale,
    )
    return NormalizationResult([r.coframe for r in res], inv.connection, inv, res, notes)


# ---------------------------------------------------------------------------
# consistency checks


def _frame_derivative(S: JetSpace, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Values of f_k(g) for each frame vector f_k at the point."""
    grad = S.gradient(g)
    return f[:, :, 0].T @ grad


@dataclass
class DJReport:
    ok: bool
    mismatch: float
    implied_N: float
    implied_L: float
    omega_coefficients: float
    per_point: list[dict]


def check_dJ_relation(result: NormalizationResult, tol: float = 1e-8, inject_J: complex = 0.0) -> DJReport:
    """Match the omega3 and omega5 coefficients of dJ against the normal form.

    The omega1, omega2, omega4 coefficients are free.  With ``inject_J``
    the J values (not their derivatives) are shifted, which must produce
    a mismatch when A or the connection is nonzero.
    """
    cj = np.conj
    rows = []
    for r in result.points:
        S, f, inv, c = r.jets["S"], r.jets["f"], r.jets["inv"], r.jets["c"]
        dJ = _frame_derivative(S, f, inv["J"])
        J = inv["J"][0] + inject_J
        A, N, L = inv["A"][0], inv["N"][0], inv["L"][0]
        c3, c4, c5 = c[2][0], c[3][0], c[4][0]
        om1 = 4 / 3 * J
        om2 = -5 / 3 * J
        rhs3 = -(cj(N) - 1j * A * J) + om1 * c3 + om2 * cj(c3)
        rhs5 = -cj(L) + om1 * c5 + om2 * cj(c4)
        n_imp = cj(-dJ[2] + 1j * A * J + om1 * c3 + om2 * cj(c3))
        l_imp = cj(-dJ[4] + om1 * c5 + om2 * cj(c4))
        rows.append(
            {
                "omega3": abs(dJ[2] - rhs3),
                "omega5": abs(dJ[4] - rhs5),
                "implied_N": abs(n_imp),
                "implied_L": abs(l_imp),
                "omega_coefficients": max(abs(om1), abs(om2)),
            }
        )
    mismatch = max(max(x["omega3"], x["omega5"]) for x in rows)
    return DJReport(
        ok=bool(mismatch < tol),
        mismatch=float(mismatch),
        implied_N=float(max(x["implied_N"] for x in rows)),
        implied_L=float(max(x["implied_L"] for x in rows)),
        omega_coefficients=float(max(x["omega_coefficients"] for x in rows)),
        per_point=rows,
    )


def d_squared_residual(result: NormalizationResult) -> float:
    """Jacobi identity of the frame built from the normal-form right-hand sides.

    sum over cyclic (a, b, c) of f_c(T^n_ab) + T^m_ab T^n_mc must vanish.
    """
    worst = 0.0
    for r in result.points:
        S, f, T = r.jets["S"], r.jets["f"], r.jets["T"]
        val = np.array([[[T[i][j][k][0] for k in range(5)] for j in range(5)] for i in range(5)])
        der = np.zeros((5, 5, 5, 5), dtype=complex)  # der[c, n, a, b] = f_c(T^n_ab)
        for n in range(5):
            for a in range(5):
                for b in range(a + 1, 5):
                    d = _frame_derivative(S, f, T[n][a][b])
                    der[:, n, a, b] = d
                    der[:, n, b, a] = -d
        for a in range(5):
            for b in range(a + 1, 5):
                for cc in range(b + 1, 5):
                    tot = np.zeros(5, dtype=complex)
                    for x, y, z in ((a, b, cc), (b, cc, a), (cc, a, b)):
                        tot += der[z, :, x, y] + val[:, x, y] @ val[:, :, z].T
                    worst = max(worst, float(np.max(np.abs(tot))))
    return worst


@dataclass
class ReductionResult:
    ok: bool
    max_g2: float
    invariant_deviation: float
    residual: float
    invariants: dict[str, np.ndarray]


def reduce_to_HJ(result: NormalizationResult, j_tol: float = 1e-6, tol: float = 1e-8) -> ReductionResult:
    """Re-normalize using only the two-parameter subgroup on the section g1 = 1."""
    if result.invariants.max_abs("J") >= j_tol:
        raise EquivalenceError("J does not vanish on the sample set")
    gauge = result.invariants.gauge
    max_g2 = dev = resid = 0.0
    values = {n: [] for n in INVARIANT_NAMES}
    for r in result.points:
        S, om = r.jets["S"], r.jets["om"]

        def run(g2):
            one = S.const(1.0)
            h = np.array(hj_matrix(one, one, g2, np.conj(g2)))
            o = S.matmul(h, om)
            f = S.inv(o)
            return _structure(S, o, f)

        (g2,) = _affine_solve(S, lambda v: _conditions(run(S.const(v[0])))[1:], 1)
        C = run(g2)
        inv, c = _extract(S, C, gauge)
        T = target_structure(inv, c, S)
        resid = max(
            resid,
            max(abs(C[i][j, k][0] - T[i][j][k][0]) for i in range(5) for j in range(5) for k in range(j + 1, 5)),
        )
        max_g2 = max(max_g2, abs(g2[0]))
        for n in INVARIANT_NAMES:
            values[n].append(complex(inv[n][0]))
            dev = max(dev, abs(inv[n][0] - r.invariants[n]))
    return ReductionResult(
        ok=bool(dev < tol and resid < 1e-9),
        max_g2=float(max_g2),
        invariant_deviation=float(dev),
        residual=float(resid),
        invariants={n: np.array(v) for n, v in values.items()},
    )
