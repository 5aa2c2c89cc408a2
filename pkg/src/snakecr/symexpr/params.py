"""Exact coefficients: rational functions of the snake parameters s1, s2, s3.

Constants are kept as :class:`fractions.Fraction` (fast path); genuinely
symbolic values are delegated to sympy's sparse rational-function field,
which keeps numerator and denominator coprime with a positive leading
denominator coefficient.
"""
from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import FracElement, field

PARAMS = ("s1", "s2", "s3")

_FIELD, _S1, _S2, _S3 = field(",".join(PARAMS), QQ)
_GENS = {"s1": _S1, "s2": _S2, "s3": _S3}


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _promote(v):
    if isinstance(v, Fraction):
        return _FIELD(QQ(v.numerator, v.denominator))
    return v


def _demote(fe: FracElement):
    num, den = fe.numer, fe.denom
    if num.is_ground and den.is_ground:
        if not num:
            return Fraction(0)
        return _to_fraction(num.LC) / _to_fraction(den.LC)
    return fe


class ParamField:
    """Element of Q(s1, s2, s3); immutable and hashable."""

    __slots__ = ("_v",)

    def __init__(self, value=0):
        if isinstance(value, ParamField):
            self._v = value._v
        elif isinstance(value, (int, Fraction)):
            self._v = Fraction(value)
        elif isinstance(value, str):
            if value in _GENS:
                self._v = _GENS[value]
            else:
                self._v = Fraction(value)
        elif isinstance(value, FracElement):
            self._v = _demote(value)
        else:
            raise TypeError(f"cannot build ParamField from {type(value).__name__}")

    @classmethod
    def _wrap(cls, v) -> "ParamField":
        obj = object.__new__(cls)
        obj._v = v
        return obj

    @classmethod
    def symbol(cls, name: str) -> "ParamField":
        if name not in _GENS:
            raise ValueError(f"unknown parameter {name!r}")
        return cls._wrap(_GENS[name])

    # -- arithmetic -------------------------------------------------------
    def _binary(self, other, op):
        if not isinstance(other, ParamField):
            if isinstance(other, (int, Fraction)):
                other = ParamField._wrap(Fraction(other))
            else:
                return NotImplemented
        a, b = self._v, other._v
        if type(a) is Fraction and type(b) is Fraction:
            return ParamField._wrap(op(a, b))
        return ParamField._wrap(_demote(op(_promote(a), _promote(b))))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return ParamField(other) - self

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = other if isinstance(other, ParamField) else ParamField(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return ParamField(other) / self

    def __neg__(self):
        return ParamField._wrap(-self._v)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers of parameters are supported")
        if n < 0:
            return ParamField(1) / (self ** (-n))
        return ParamField._wrap(_demote(_promote(self._v) ** n) if type(self._v) is not Fraction else self._v**n)

    def __eq__(self, other):
        if isinstance(other, ParamField):
            return self._v == other._v
        if isinstance(other, (int, Fraction)):
            return type(self._v) is Fraction and self._v == other
        return NotImplemented

    def __hash__(self):
        return hash(self._v)

    def __bool__(self):
        return bool(self._v)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._v

    def is_constant(self) -> bool:
        return type(self._v) is Fraction

    def as_fraction(self) -> Fraction:
        if type(self._v) is not Fraction:
            raise ValueError(f"{self} depends on parameters")
        return self._v

    def free_params(self) -> tuple[str, ...]:
        if self.is_constant():
            return ()
        used = set()
        for poly in (self._v.numer, self._v.denom):
            for monom in poly.monoms():
                used.update(PARAMS[i] for i, e in enumerate(monom) if e)
        return tuple(p for p in PARAMS if p in used)

    def numerator_terms(self) -> list[tuple[tuple[int, int, int], Fraction]]:
        if self.is_constant():
            return [((0, 0, 0), Fraction(self._v.numerator))] if self._v else []
        return [(m, _to_fraction(c)) for m, c in self._v.numer.terms()]

    def denominator_terms(self) -> list[tuple[tuple[int, int, int], Fraction]]:
        if self.is_constant():
            return [((0, 0, 0), Fraction(self._v.denominator))]
        return [(m, _to_fraction(c)) for m, c in self._v.denom.terms()]

    def evaluate(self, values) -> float:
        """Float value with ``values`` mapping parameter names to numbers."""
        if type(self._v) is Fraction:
            return float(self._v)
        s = [float(values[p]) if p in values else None for p in PARAMS]
        num = _eval_terms(self.numerator_terms(), s)
        den = _eval_terms(self.denominator_terms(), s)
        if abs(den) <= 1e-12:
            raise ZeroDivisionError(f"denominator of {self} vanishes at {values}")
        return num / den

    def substitute(self, values) -> "ParamField":
        """Exact substitution of some parameters by rationals or ParamFields."""
        if type(self._v) is Fraction or not values:
            return self
        v = self._v
        for name, val in values.items():
            val = ParamField(val)
            v = _compose(v, name, val)
            if isinstance(v, FracElement):
                v = _demote(v)
            if type(v) is Fraction:
                break
        return ParamField._wrap(v)

    def __repr__(self):
        return f"ParamField({str(self)!r})"

    def __str__(self):
        if type(self._v) is Fraction:
            return str(self._v)
        den_terms = self.denominator_terms()
        if len(den_terms) == 1 and den_terms[0][0] == (0, 0, 0):
            d = den_terms[0][1]
            return _poly_str([(m, c / d) for m, c in self.numerator_terms()])
        num_terms = self.numerator_terms()
        num = _poly_str(num_terms)
        den = _poly_str(den_terms)
        if len(num_terms) > 1:
            num = f"({num})"
        if len(den_terms) > 1 or _is_product(den_terms):
            den = f"({den})"
        return f"{num}/{den}"


def _is_product(terms) -> bool:
    (monom, c), = terms
    return c != 1 or sum(1 for e in monom if e) > 1 or any(e > 1 for e in monom) and c != 1


def _compose(v: FracElement, name: str, val: "ParamField"):
    gens = [_GENS[p] for p in PARAMS]
    gens[PARAMS.index(name)] = _promote(val._v)

    def ev(poly):
        out = _FIELD(0)
        for monom, coeff in poly.terms():
            t = _FIELD(coeff)
            for g, e in zip(gens, monom):
                if e:
                    t = t * g**e
            out = out + t
        return out

    return ev(v.numer) / ev(v.denom)


def _eval_terms(terms, s) -> float:
    total = 0.0
    for monom, c in terms:
        t = float(c)
        for i, e in enumerate(monom):
            if e:
                if s[i] is None:
                    raise KeyError(f"parameter {PARAMS[i]} is not assigned")
                t *= s[i] ** e
        total += t
    return total


def _monom_str(monom) -> str:
    parts = []
    for name, e in zip(PARAMS, monom):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _poly_str(terms) -> str:
    out = []
    for monom, c in sorted(terms, key=lambda t: (-sum(t[0]), tuple(-e for e in t[0]))):
        m = _monom_str(monom)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not m:
            body = str(a)
        elif a == 1:
            body = m
        elif a.denominator == 1:
            body = f"{a}*{m}"
        else:
            body = f"{a.numerator}*{m}/{a.denominator}" if a.numerator != 1 else f"{m}/{a.denominator}"
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


ZERO = ParamField(0)
ONE = ParamField(1)
HALF = ParamField(Fraction(1, 2))


def as_param(value) -> ParamField:
    """Coerce ints, Fractions, "p/q" strings and parameter names."""
    if isinstance(value, ParamField):
        return value
    return ParamField(value)
