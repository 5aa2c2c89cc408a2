"""Stable text rendering of trig polynomials (round-trips through parse)."""
from __future__ import annotations

from .trig import ANGLES, CARTESIAN, COS, TrigExpr


def _mono_str(mono) -> list[str]:
    out = []
    for name, e in zip(CARTESIAN, mono):
        if e == 1:
            out.append(name)
        elif e:
            out.append(f"{name}^{e}")
    return out


def _arg_str(freq) -> str:
    text = ""
    for name, f in zip(ANGLES, freq):
        if not f:
            continue
        mag = abs(f)
        body = name if mag == 1 else f"{mag}*{name}"
        if not text:
            text = body if f > 0 else f"-{body}"
        else:
            text += f" {'+' if f > 0 else '-'} {body}"
    return text


def to_string(e: TrigExpr) -> str:
    if e.is_zero():
        return "0"
    pieces = []
    for (mono, freq, kind), c in e.sorted_terms():
        factors = _mono_str(mono)
        if any(freq):
            factors.append(f"{'cos' if kind == COS else 'sin'}({_arg_str(freq)})")
        if c.is_constant():
            v = c.as_fraction()
            sign = "-" if v < 0 else "+"
            v = abs(v)
            if factors:
                lead = [] if v == 1 else [_frac(v)]
                body = "*".join(lead + factors)
            else:
                body = _frac(v)
        else:
            sign = "+"
            body = "*".join([f"({c})"] + factors)
        pieces.append((sign, body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _frac(v) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
