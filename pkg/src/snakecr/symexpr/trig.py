"""Canonical trigonometric polynomials.

A :class:`TrigExpr` is a finite sum of terms

    c * x^a * cos(k . angles)    or    c * x^a * sin(k . angles)

with ``c`` a :class:`ParamField`, ``x^a`` a monomial in the Cartesian
variables and ``k`` an integer frequency vector.  Products of trig factors
are always expanded into single cosines or sines (Fourier basis), so
``sin^2 + cos^2 - 1`` collapses to zero and the zero test is structural.

Canonical form: the first non-zero entry of ``k`` is positive (odd/even
reflection applied to the coefficient), ``sin(0)`` terms are dropped and
zero coefficients are removed.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .params import HALF, ONE, ZERO, ParamField, as_param

CARTESIAN = ("x", "y", "z", "x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4")
ANGLES = ("theta", "phi", "psi", "beta1", "beta2", "beta3")
VARIABLES = CARTESIAN + ANGLES
NC, NA = len(CARTESIAN), len(ANGLES)
_CIDX = {v: i for i, v in enumerate(CARTESIAN)}
_AIDX = {v: i for i, v in enumerate(ANGLES)}

COS, SIN = 0, 1
_ZC = (0,) * NC
_ZA = (0,) * NA


def is_cartesian(name: str) -> bool:
    return name in _CIDX


def is_angle(name: str) -> bool:
    return name in _AIDX


def _canon(freq: tuple, kind: int, coef: ParamField):
    """Return (freq, kind, coef) in canonical orientation or None."""
    for f in freq:
        if f > 0:
            return freq, kind, coef
        if f < 0:
            freq = tuple(-g for g in freq)
            return freq, kind, (-coef if kind == SIN else coef)
    if kind == SIN:
        return None
    return freq, kind, coef


def _accumulate(acc: dict, key, coef: ParamField):
    old = acc.get(key)
    acc[key] = coef if old is None else old + coef


class TrigExpr:
    """Immutable canonical trig polynomial; see the module docstring."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        self._terms = {}
        self._hash = None
        if terms:
            for key, c in terms.items():
                if not c.is_zero():
                    self._terms[key] = c

    @classmethod
    def _raw(cls, terms: dict) -> "TrigExpr":
        obj = object.__new__(cls)
        obj._terms = {k: c for k, c in terms.items() if not c.is_zero()}
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, value) -> "TrigExpr":
        c = as_param(value)
        return cls._raw({(_ZC, _ZA, COS): c})

    @classmethod
    def var(cls, name: str) -> "TrigExpr":
        if name in _CIDX:
            mono = [0] * NC
            mono[_CIDX[name]] = 1
            return cls._raw({(tuple(mono), _ZA, COS): ONE})
        if name in ("s1", "s2", "s3"):
            return cls.const(ParamField.symbol(name))
        raise ValueError(f"{name!r} is not a polynomial variable")

    @classmethod
    def trig(cls, kind: str, freq: Mapping[str, int], coef=1) -> "TrigExpr":
        """``cos``/``sin`` of an integer combination of angle variables."""
        k = [0] * NA
        for name, f in freq.items():
            if name not in _AIDX:
                raise ValueError(f"{name!r} is not an angle variable")
            if int(f) != f:
                raise ValueError("trig arguments need integer coefficients")
            k[_AIDX[name]] = int(f)
        res = _canon(tuple(k), COS if kind == "cos" else SIN, as_param(coef))
        if res is None:
            return ZERO_EXPR
        return cls._raw({(_ZC, res[0], res[1]): res[2]})

    @classmethod
    def cos(cls, **freq) -> "TrigExpr":
        return cls.trig("cos", freq)

    @classmethod
    def sin(cls, **freq) -> "TrigExpr":
        return cls.trig("sin", freq)

    # -- structure --------------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (_ZC, _ZA, COS) for k in self._terms)

    def constant_value(self) -> ParamField:
        if not self.is_constant():
            raise ValueError("expression is not a pure parameter value")
        return self._terms.get((_ZC, _ZA, COS), ZERO)

    def variables(self) -> tuple[str, ...]:
        used = set()
        for mono, freq, _ in self._terms:
            used.update(CARTESIAN[i] for i, e in enumerate(mono) if e)
            used.update(ANGLES[i] for i, f in enumerate(freq) if f)
        return tuple(v for v in VARIABLES if v in used)

    def free_params(self) -> tuple[str, ...]:
        used = set()
        for c in self._terms.values():
            used.update(c.free_params())
        return tuple(p for p in ("s1", "s2", "s3") if p in used)

    def __len__(self):
        return len(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TrigExpr):
            return other
        if isinstance(other, (int, Fraction, ParamField)):
            return TrigExpr.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(acc, k, c)
        return TrigExpr._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return TrigExpr._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(acc, k, -c)
        return TrigExpr._raw(acc)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c) -> "TrigExpr":
        c = as_param(c)
        if c.is_zero():
            return ZERO_EXPR
        return TrigExpr._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamField)):
            return self.scale(other)
        if not isinstance(other, TrigExpr):
            return NotImplemented
        acc: dict = {}
        for (m1, f1, k1), a in self._terms.items():
            for (m2, f2, k2), b in other._terms.items():
                mono = tuple(p + q for p, q in zip(m1, m2))
                ab = a * b
                if not any(f2):
                    _accumulate(acc, (mono, f1, k1), ab)
                    continue
                if not any(f1):
                    _accumulate(acc, (mono, f2, k2), ab)
                    continue
                h = ab * HALF
                fs = tuple(p + q for p, q in zip(f1, f2))
                fd = tuple(p - q for p, q in zip(f1, f2))
                # product-to-sum identities
                if k1 == COS and k2 == COS:
                    parts = ((fd, COS, h), (fs, COS, h))
                elif k1 == SIN and k2 == SIN:
                    parts = ((fd, COS, h), (fs, COS, -h))
                elif k1 == SIN:  # sin a cos b
                    parts = ((fs, SIN, h), (fd, SIN, h))
                else:  # cos a sin b
                    parts = ((fs, SIN, h), (fd, SIN, -h))
                for f, k, c in parts:
                    res = _canon(f, k, c)
                    if res is not None:
                        _accumulate(acc, (mono, res[0], res[1]), res[2])
        return TrigExpr._raw(acc)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, TrigExpr):
            if not other.is_constant():
                raise ValueError("division is only defined by pure parameter values")
            other = other.constant_value()
        return self.scale(ONE / as_param(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are allowed")
        result = ONE_EXPR
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, TrigExpr) else other
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .printer import to_string

        return f"TrigExpr({to_string(self)!r})"

    def __str__(self):
        from .printer import to_string

        return to_string(self)

    # -- calculus and substitution ------------------------------------------
    def diff(self, name: str) -> "TrigExpr":
        """Partial derivative with respect to one variable."""
        acc: dict = {}
        if name in _CIDX:
            i = _CIDX[name]
            for (mono, freq, kind), c in self._terms.items():
                e = mono[i]
                if e:
                    m = list(mono)
                    m[i] = e - 1
                    _accumulate(acc, (tuple(m), freq, kind), c * e)
        elif name in _AIDX:
            j = _AIDX[name]
            for (mono, freq, kind), c in self._terms.items():
                f = freq[j]
                if f:
                    if kind == COS:
                        _accumulate(acc, (mono, freq, SIN), c * (-f))
                    else:
                        _accumulate(acc, (mono, freq, COS), c * f)
        elif name in ("s1", "s2", "s3"):
            raise ValueError("parameters are constants here; differentiate numerators instead")
        else:
            raise ValueError(f"unknown variable {name!r}")
        return TrigExpr._raw(acc)

    def map_coefficients(self, fn) -> "TrigExpr":
        acc: dict = {}
        for k, c in self._terms.items():
            _accumulate(acc, k, fn(c))
        return TrigExpr._raw(acc)

    def specialize(self, values: Mapping) -> "TrigExpr":
        """Substitute parameter values (rationals or ParamFields)."""
        if not values:
            return self
        return self.map_coefficients(lambda c: c.substitute(values))

    def compose(
        self,
        cartesian: Mapping[str, "TrigExpr"] | None = None,
        angles: Mapping[str, tuple[Mapping[str, int], int]] | None = None,
    ) -> "TrigExpr":
        """Substitute variables.

        ``cartesian`` maps Cartesian variables to TrigExprs.  ``angles`` maps
        an angle variable to ``(linear combination, quarter_turns)`` meaning
        ``sum_j a_j * angle_j + quarter_turns * pi / 2``.
        """
        cartesian = dict(cartesian or {})
        angles = dict(angles or {})
        powers: dict = {}

        def cart_power(i, e):
            key = (i, e)
            if key not in powers:
                name = CARTESIAN[i]
                base = cartesian[name] if name in cartesian else TrigExpr.var(name)
                powers[key] = base**e
            return powers[key]

        total: dict = {}
        for (mono, freq, kind), c in self._terms.items():
            # new frequency vector and quarter-turn phase
            newf = [0] * NA
            quarter = 0
            for j, f in enumerate(freq):
                if not f:
                    continue
                name = ANGLES[j]
                if name in angles:
                    comb, q = angles[name]
                    for a, w in comb.items():
                        newf[_AIDX[a]] += f * int(w)
                    quarter += f * int(q)
                else:
                    newf[j] += f
            term = _phase_trig(tuple(newf), kind, quarter % 4, c)
            for i, e in enumerate(mono):
                if e:
                    name = CARTESIAN[i]
                    if name in cartesian:
                        term = term * cart_power(i, e)
                    else:
                        m = [0] * NC
                        m[i] = e
                        term = term * TrigExpr._raw({(tuple(m), _ZA, COS): ONE})
            for k, v in term._terms.items():
                _accumulate(total, k, v)
        return TrigExpr._raw(total)


def _phase_trig(freq, kind, quarter, c) -> TrigExpr:
    """c * cos/sin(freq.angles + quarter*pi/2) in canonical form."""
    # cos(a + pi/2) = -sin a, sin(a + pi/2) = cos a
    sign = 1
    for _ in range(quarter):
        if kind == COS:
            kind, sign = SIN, -sign
        else:
            kind = COS
    res = _canon(freq, kind, c if sign > 0 else -c)
    if res is None:
        return ZERO_EXPR
    return TrigExpr._raw({(_ZC, res[0], res[1]): res[2]})


ZERO_EXPR = TrigExpr()
ONE_EXPR = TrigExpr.const(1)


def combine(exprs: Iterable[TrigExpr]) -> TrigExpr:
    """Sum a sequence of expressions into one canonical expression."""
    acc: dict = {}
    for e in exprs:
        for k, c in e.terms.items():
            _accumulate(acc, k, c)
    return TrigExpr._raw(acc)


def differentiate(e: TrigExpr, name: str) -> TrigExpr:
    return e.diff(name)


def is_zero(e: TrigExpr) -> bool:
    return e.is_zero()


def eval_numeric(e: TrigExpr, point: Mapping[str, float], params: Mapping | None = None) -> float:
    """Evaluate at a numeric point; ``params`` supplies symbolic s1, s2, s3."""
    params = params or {}
    total = 0.0
    for (mono, freq, kind), c in e.terms.items():
        t = c.evaluate(params)
        for i, p in enumerate(mono):
            if p:
                t *= point[CARTESIAN[i]] ** p
        arg = 0.0
        for j, f in enumerate(freq):
            if f:
                arg += f * point[ANGLES[j]]
        total += t * (math.cos(arg) if kind == COS else math.sin(arg))
    return total
