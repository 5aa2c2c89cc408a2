"""Exact evaluation at rational trig points.

An angle is specified through its half-angle tangent t, so that
cos = (1 - t^2)/(1 + t^2) and sin = 2t/(1 + t^2) are rational.  Higher
frequencies come from exact powers of the Gaussian rational cos + i sin.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .trig import ANGLES, CARTESIAN, COS, TrigExpr


def unit_from_tangent(t: Fraction) -> tuple[Fraction, Fraction]:
    t = Fraction(t)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cpow(z, n):
    if n < 0:
        z = (z[0], -z[1])  # unit modulus: inverse is the conjugate
        n = -n
    out = (Fraction(1), Fraction(0))
    while n:
        if n & 1:
            out = _cmul(out, z)
        z = _cmul(z, z)
        n >>= 1
    return out


class RationalPoint:
    """Point with rational Cartesian coordinates and rational-trig angles."""

    def __init__(self, cartesian: Mapping[str, Fraction], tangents: Mapping[str, Fraction]):
        self.cartesian = {k: Fraction(v) for k, v in cartesian.items()}
        self.units = {k: unit_from_tangent(t) for k, t in tangents.items()}
        self.tangents = {k: Fraction(t) for k, t in tangents.items()}

    def float_point(self) -> dict[str, float]:
        import math

        out = {k: float(v) for k, v in self.cartesian.items()}
        for k, (c, s) in self.units.items():
            out[k] = math.atan2(float(s), float(c))
        return out


def eval_exact(e: TrigExpr, point: RationalPoint, params: Mapping | None = None) -> Fraction:
    """Exact value; parameters must be rational or supplied in ``params``."""
    total = Fraction(0)
    cache: dict = {}
    for (mono, freq, kind), c in e.terms.items():
        if not c.is_constant():
            c = c.substitute(params or {})
        v = c.as_fraction()
        for i, p in enumerate(mono):
            if p:
                v *= point.cartesian[CARTESIAN[i]] ** p
        z = (Fraction(1), Fraction(0))
        for j, f in enumerate(freq):
            if f:
                key = (j, f)
                if key not in cache:
                    cache[key] = _cpow(point.units[ANGLES[j]], f)
                z = _cmul(z, cache[key])
        total += v * (z[0] if kind == COS else z[1])
    return total
