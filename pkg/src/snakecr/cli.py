"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 solver inconclusive.
"""
from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import cr_structure as cr
from . import equivalence as eq
from . import kinematics as kin
from . import report as rp
from .report import Check, status
from .snake_model import (
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
)
from .symexpr import parse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def rational(text: str) -> str:
    """Accept integers and p/q only; decimals are ambiguous and rejected."""
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    return text.replace(" ", "")


def _params(s1, s2, s3) -> SnakeParams:
    try:
        return SnakeParams(s1, s2, s3)
    except (ModelError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def _floats(text: str, n: int) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {len(vals)}")
    return vals


# ---------------------------------------------------------------------------
# subcommands; each returns (parameters, checks, data, extra)

LITERAL_FAILURES = {
    "Upsilon1(xi5)": "2*sin(phi)",
    "Upsilon3(xi5)": "2*sin(psi)",
    "Upsilon3(xi4)": "2*s3 - 2*(1 - s2)*cos(psi)",
}


def cmd_verify_model(a):
    p = _params(a.s1, a.s2, a.s3)
    m = build_model(p, wheel=a.wheel)
    checks = []
    res = [str(r) for r in constraint_residuals(m)]
    checks.append(Check("constraint_exactness", status(all(r == "0" for r in res)), res, "exact", 1))
    pairs = {k: str(v) for k, v in pairing_table(m).items()}
    checks.append(Check("pfaffian_kernel", status(all(v == "0" for v in pairs.values())), pairs, "exact", 2))
    skid = {k: str(v) for k, v in non_skidding_residuals(m).items()}
    checks.append(Check("non_skidding", status(all(v == "0" for v in skid.values())), skid, "exact"))
    lit = literal_model(p)
    got = {k: v for k, v in lit.pairings().items() if not v.is_zero()}
    want = {k: parse(v).specialize(p.values()) for k, v in LITERAL_FAILURES.items()}
    want = {k: v for k, v in want.items() if not v.is_zero()}
    checks.append(
        Check("literal_failures_reproduced", status(got == want), {k: str(v) for k, v in sorted(got.items())}, "exact", 2)
    )
    g = check_growth(m, n_points=a.points, seed=a.seed)
    checks.append(Check("growth_symbolic", status(g.symbolic == (2, 3, 5)), list(g.symbolic), "exact", 3))
    checks.append(
        Check("growth_numeric", status(g.numeric_fraction >= 0.95), g.numeric_fraction,
              {"fraction_min": 0.95, "sv_threshold": 1e-8}, 3, {"counts": g.numeric_counts, "points": a.points})
    )
    sym = check_symmetries(m)
    checks.append(Check("symmetries", status(sym.all_hold), sym.holds, "exact", 4))
    data = {
        "discrepancies": discrepancy_report(m, lit).as_json(),
        "frame_determinant": str(frame_determinant(m)),
        "growth_vector": list(g.symbolic),
    }
    return p.as_json(), checks, data, {"conventions": m.conventions.as_json(), "seeds": {"sampling": a.seed}}


def cmd_solve_j(a):
    p = _params(a.s1, a.s2, a.s3)
    m = build_model(p)
    r = cr.solve_complex_structure(m, conditions=a.conditions, n_check=a.check_points, seed=a.seed,
                                   newton_starts=a.newton_starts)
    half = p.s2.is_constant() and str(p.s2) == "1/2"
    checks = [Check("solver_conclusive", status(r.status != "inconclusive"), r.status, None, 5)]
    if r.status != "inconclusive":
        if half:
            ref = cr.REFERENCE_J
            ok = ref in r.solutions and all(J in (ref, -ref) for J in r.solutions) and all(
                -J in r.solutions for J in r.solutions)
        else:
            ok = r.status == "empty"
        checks.append(Check("existence_iff_half", status(ok), len(r.solutions), "exact", 5))
        checks.append(Check("squares_to_minus_identity",
                            status(all(cr.verify_complex_structure(J) for J in r.solutions)), len(r.solutions), "exact", 6))
    data = {
        "status": r.status,
        "solution_set": "empty" if r.status == "empty" else [J.as_json() for J in r.solutions],
        "stage1_dimension": r.stage1_dimension,
        "stage2_method": r.stage2_method,
        "diagnostics": r.diagnostics,
    }
    return p.as_json(), checks, data, {"seeds": {"solver": a.seed}, "_inconclusive": r.status == "inconclusive"}


def cmd_coframe(a):
    p = _params(a.s1, "1/2", a.s3)
    m = build_model(p)
    c, vals = cr.adapted_coframe(m, n_points=a.points, seed=a.seed)
    f = c.forms
    checks = []
    reality = f[1] == f[0].conjugate() and f[4] == f[3].conjugate() and f[2].im.is_zero()
    checks.append(Check("reality_conditions", status(reality), reality, "exact", 8))
    top = c.top_wedge()
    checks.append(Check("wedge_nonzero", status(not (top.re.is_zero() and top.im.is_zero())), None, "exact", 8))
    checks.append(Check("wedge_magnitude", status(float(np.min(vals)) > 1e-6), float(np.min(vals)), 1e-6, 8))
    signs = cr.holomorphic_check(cr.REFERENCE_J)
    eps = cr.global_orientation(signs)
    checks.append(Check("holomorphic_orientation", status(eps is not None), eps, "exact", 7, {"signs": signs}))
    bc = cr.beta_chart(m)
    rt = cr.beta_roundtrip_residuals(m, bc)
    checks.append(Check("beta_chart_roundtrip", status(all(v.is_zero() for v in rt.values())),
                        {k: str(v) for k, v in rt.items()}, "exact"))
    ef = cr.eigenfields(m, cr.REFERENCE_J)
    ok = cr.eigen_residual(cr.REFERENCE_J, ef.plus, 1) and cr.eigen_residual(cr.REFERENCE_J, ef.minus, -1)
    checks.append(Check("eigenfields", status(ok), ok, "exact"))
    forms = [{"re": repr(x.re), "im": repr(x.im)} for x in f]
    data = {"forms": forms, "wedge_abs": vals, "beta_chart": bc.as_json()}
    return p.as_json(), checks, data, {"seeds": {"sampling": a.seed}}


def _invariant_checks(res: eq.NormalizationResult, prefix: str = "") -> list[Check]:
    inv = res.invariants
    checks = [Check(prefix + "fit_residual", status(inv.residual < 1e-9), inv.residual, 1e-9, 10)]
    for n in eq.INVARIANT_NAMES:
        mx = inv.max_abs(n)
        if n in eq.VANISHING:
            checks.append(Check(f"{prefix}{n}_vanishing", status(mx < eq.VANISH_TOL), mx, eq.VANISH_TOL, 10))
        else:
            st = rp.PASS if mx > eq.NONVANISH_TOL else rp.FAIL if mx < eq.VANISH_TOL else rp.INDETERMINATE
            checks.append(Check(f"{prefix}{n}_non_vanishing", st, mx, eq.NONVANISH_TOL, 10))
    return checks


def cmd_invariants(a):
    p = _params(a.s1, "1/2", a.s3)
    m = build_model(p)
    c, _ = cr.adapted_coframe(m)
    pts = M_CHART.sample(np.random.default_rng(a.seed), a.points)
    res = eq.normalize_coframe(c, m.params.floats(), pts, mode=a.mode, gauge=a.gauge, order=a.order, scale=a.scale)
    inv = res.invariants
    checks = _invariant_checks(res)
    checks.append(Check("T_real", status(inv.max_imag_T() < 1e-9), inv.max_imag_T(), 1e-9))
    d = eq.check_dJ_relation(res)
    checks.append(Check("dJ_relation", status(d.ok), d.mismatch, 1e-8, 11))
    checks.append(Check("dJ_forces_N_L", status(max(d.implied_N, d.implied_L) < 1e-6),
                        {"N": d.implied_N, "L": d.implied_L}, 1e-6, 11))
    neg = eq.check_dJ_relation(res, inject_J=0.1)
    checks.append(Check("dJ_negative_control", status(not neg.ok), neg.mismatch, 1e-8, 11))
    d2 = eq.d_squared_residual(res)
    checks.append(Check("d_squared_consistency", status(d2 < 1e-8), d2, 1e-8))
    try:
        red = eq.reduce_to_HJ(res)
        checks.append(Check("reduction_to_HJ", status(red.ok), red.invariant_deviation, 1e-8, None,
                            {"max_g2": red.max_g2, "residual": red.residual}))
    except eq.EquivalenceError as exc:
        checks.append(Check("reduction_to_HJ", rp.FAIL, None, 1e-8, None, {"error": str(exc)}))
    table = [
        {"point": r.point, "residual": r.residual, "invariants": r.invariants, "connection": r.connection}
        for r in res.points
    ]
    data = {"pattern": inv.pattern(), "max_abs": {n: inv.max_abs(n) for n in eq.INVARIANT_NAMES},
            "gauge": a.gauge, "scale": a.scale, "mode_used": inv.mode, "warnings": res.warnings, "points": table}
    params = dict(p.as_json(), points=a.points, mode=a.mode, gauge=a.gauge, scale=a.scale, order=a.order)
    return params, checks, data, {"seeds": {"sampling": a.seed}}


def _sweep_cells(grid: list[str], points: int, seed: int, gauge: str):
    cells = []
    expected = {n: ("vanishing" if n in eq.VANISHING else "non-vanishing") for n in eq.INVARIANT_NAMES}
    for s in grid:
        cell = {"s1": s, "s3": s, "s2": "1/2"}
        try:
            m = build_model(SnakeParams(s, "1/2", s))
            c, _ = cr.adapted_coframe(m)
            pts = M_CHART.sample(np.random.default_rng(seed), points)
            inv = eq.normalize_coframe(c, m.params.floats(), pts, gauge=gauge).invariants
            pat = inv.pattern()
            cell.update(status="ok", residual=inv.residual, max_abs={n: inv.max_abs(n) for n in eq.INVARIANT_NAMES},
                        pattern=pat, deviates=sorted(n for n in pat if pat[n] != expected[n]))
        except Exception as exc:
            cell.update(status="error", error=f"{type(exc).__name__}: {exc}")
        cells.append(cell)
    return cells


def cmd_sweep(a):
    grid = [g for g in (x.strip() for x in a.grid.split(",")) if g]
    for g in grid:
        try:
            rational(g)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"--grid: {exc}") from None
    cells = _sweep_cells(grid, a.points, a.seed, a.gauge)
    done = [c for c in cells if c["status"] == "ok"]
    pats = {tuple(sorted(c["pattern"].items())) for c in done}
    checks = [
        Check("cells_completed", status(len(done) == len(cells)), f"{len(done)}/{len(cells)}", "all"),
        Check("pattern_identical", status(len(pats) <= 1), len(pats), 1),
    ]
    if a.csv:
        _write_sweep_csv(cells, a.csv)
    params = {"grid": grid, "points": a.points, "gauge": a.gauge}
    return params, checks, {"cells": cells}, {"seeds": {"sampling": a.seed}}


def _write_sweep_csv(cells, path):
    import csv

    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["s1", "s3", "status", "residual", *[f"max_{n}" for n in eq.INVARIANT_NAMES], "deviates"])
        for c in cells:
            if c["status"] == "ok":
                w.writerow([c["s1"], c["s3"], "ok", repr(c["residual"]),
                            *[repr(c["max_abs"][n]) for n in eq.INVARIANT_NAMES], " ".join(c["deviates"])])
            else:
                w.writerow([c["s1"], c["s3"], "error", "", *[""] * len(eq.INVARIANT_NAMES), c["error"]])


def cmd_simulate(a):
    p = _params(a.s1, a.s2, a.s3)
    m = build_model(p)
    q0 = _floats(a.q0, 5)
    if a.dt <= 0:
        raise UsageError("--dt must be positive")
    if a.controls:
        u = kin.ControlSignal.from_csv(a.controls, a.dt, a.T)
    else:
        u1, u2 = _floats(a.u, 2)
        if a.T is None:
            raise UsageError("--T is required with constant controls")
        u = kin.ControlSignal.constant(u1, u2, a.T, a.dt)
    traj = kin.integrate_controls(m, q0, u, require_generic=a.require_generic)
    out = Path(a.out) if a.out else rp.default_path("trajectory").with_suffix(".csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    kin.write_csv(traj, str(out))
    dr = kin.drift_report(traj)
    checks = [
        Check("completed", status(traj.halted is None), traj.halted, None),
        Check("pfaffian_drift", status(dr["pfaffian_drift_max"] < 1e-8), dr["pfaffian_drift_max"], 1e-8),
        Check("constraint_drift", status(dr["constraint_drift_max"] <= 1e-8 * max(u.T, 1e-300)),
              dr["constraint_drift_max"], 1e-8 * u.T),
    ]
    params = dict(p.as_json(), q0=q0, dt=a.dt, T=u.T, controls=a.controls or a.u)
    data = {"drift": dr, "final_state": traj.q[-1], "trajectory_csv": str(out)}
    return params, checks, data, {}


def cmd_report(a):
    from .acceptance import CRITERIA, run_all

    include = tuple(int(x) for x in a.criteria.split(",")) if a.criteria else tuple(CRITERIA)
    bad = [k for k in include if k not in CRITERIA]
    if bad:
        raise UsageError(f"unknown criteria {bad}")
    checks = run_all(seed=a.seed, points=a.points, include=include)
    return {"points": a.points, "criteria": list(include)}, checks, {}, {"seeds": {"sampling": a.seed}}


COMMANDS = {
    "verify-model": cmd_verify_model,
    "solve-J": cmd_solve_j,
    "coframe": cmd_coframe,
    "invariants": cmd_invariants,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="snakecr", description="Verify the snake-robot distribution, CR structure and invariants.")
    ap.add_argument("--version", action="version", version=f"snakecr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, json_out=True):
        if json_out:
            sp.add_argument("--out", help="JSON report path (default: $SNAKECR_OUT/<command>.json)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identity)")
        sp.add_argument("--quiet", action="store_true")

    def params(sp, s2=True):
        sp.add_argument("--s1", type=rational, default="1")
        if s2:
            sp.add_argument("--s2", type=rational, default="1/2")
        sp.add_argument("--s3", type=rational, default="1")

    sp = sub.add_parser("verify-model", help="constraints, Pfaffian kernel, growth vector, symmetries")
    params(sp)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--wheel", choices=("pfaffian", "constraint"), default="pfaffian")
    common(sp)

    sp = sub.add_parser("solve-J", help="constant complex structures with J(TM) n TM = D")
    params(sp)
    sp.add_argument("--conditions", choices=("distribution", "tangent"), default="distribution")
    sp.add_argument("--check-points", type=int, default=20)
    sp.add_argument("--newton-starts", type=int, default=100)
    common(sp)

    sp = sub.add_parser("coframe", help="adapted coframe, holomorphic coordinates, beta chart (s2 = 1/2)")
    params(sp, s2=False)
    sp.add_argument("--points", type=int, default=20)
    common(sp)

    sp = sub.add_parser("invariants", help="normalize the coframe and report the invariants (s2 = 1/2)")
    params(sp, s2=False)
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--mode", choices=("pointwise", "symbolic"), default="pointwise")
    sp.add_argument("--gauge", choices=eq.GAUGES, default="balanced")
    sp.add_argument("--scale", choices=eq.SCALES, default="unit_T")
    sp.add_argument("--order", type=int, default=6)
    common(sp)

    sp = sub.add_parser("sweep", help="invariant pattern over a grid of s1 = s3 values (s2 = 1/2)")
    sp.add_argument("--grid", default="1/2,1,2", help="comma-separated p/q values")
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--gauge", choices=eq.GAUGES, default="balanced")
    sp.add_argument("--csv", help="also write the grid as CSV")
    common(sp)

    sp = sub.add_parser("simulate", help="integrate admissible controls and write a CSV trajectory")
    params(sp)
    sp.add_argument("--controls", help="CSV with rows t,u1,u2 (piecewise constant)")
    sp.add_argument("--u", default="0,1", help="constant controls u1,u2 when no CSV is given")
    sp.add_argument("--q0", default="0,0,0,0.5,-0.5", help="x,y,theta,phi,psi")
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--T", type=float, default=None)
    sp.add_argument("--out", help="trajectory CSV (default: $SNAKECR_OUT/trajectory.csv)")
    sp.add_argument("--report", help="JSON report path (default: $SNAKECR_OUT/simulate.json)")
    sp.add_argument("--require-generic", action="store_true", help="halt where the 5-frame degenerates")
    common(sp, json_out=False)

    sp = sub.add_parser("report", help="run the full acceptance suite")
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--criteria", default="", help="comma-separated criterion numbers (default: all)")
    common(sp)
    return ap


def run_command(argv: list[str]) -> tuple[str | None, int, dict]:
    """Run without writing the report; returns (json text, exit code, report dict)."""
    try:
        a = build_parser().parse_args(argv)
        t0 = time.perf_counter()
        params, checks, data, extra = COMMANDS[a.command](a)
    except UsageError as exc:
        return None, EXIT_USAGE, {"error": str(exc)}
    inconclusive = extra.pop("_inconclusive", False)
    if a.timing:
        extra["timing_seconds"] = time.perf_counter() - t0
    rep = rp.build_report(a.command, params, checks, data, **extra)
    if inconclusive:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL
    rep["exit_code"] = code
    return rp.dumps(rep), code, rep


def _summary(rep: dict) -> str:
    lines = [f"snakecr {rep['command']}: {rep['summary']['pass']} pass, {rep['summary']['fail']} fail, "
             f"{rep['summary']['indeterminate']} indeterminate"]
    for c in rep["checks"]:
        crit = f" [criterion {c['criterion']}]" if c["criterion"] else ""
        lines.append(f"  {c['status'].upper():13s} {c['id']}{crit}")
    if rep["command"] == "solve-J":
        sset = rep["data"]["solution_set"]
        lines.append("solution set: " + (sset if isinstance(sset, str) else f"{len(sset)} matrices"))
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    text, code, rep = run_command(argv)
    if text is None:
        print(f"usage error: {rep['error']}", file=sys.stderr)
        return code
    a = build_parser().parse_args(argv)
    path = a.report if a.command == "simulate" else a.out
    written = rp.write(rep, path, a.command)
    if not a.quiet:
        print(_summary(rep))
        print(f"report: {written}")
    return code


if __name__ == "__main__":
    sys.exit(main())
