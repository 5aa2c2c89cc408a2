"""Exact symbolic layer: parameter field, trig polynomials, parsing."""
from .exact import RationalPoint, eval_exact, unit_from_tangent
from .params import PARAMS, ParamField, as_param
from .parser import ParseError, eval_tree, parse, parse_param, parse_tree
from .printer import to_string
from .trig import (
    ANGLES,
    CARTESIAN,
    ONE_EXPR,
    VARIABLES,
    ZERO_EXPR,
    TrigExpr,
    combine,
    differentiate,
    eval_numeric,
    is_angle,
    is_cartesian,
    is_zero,
)

__all__ = [
    "ANGLES", "CARTESIAN", "ONE_EXPR", "PARAMS", "ParamField", "ParseError",
    "RationalPoint", "TrigExpr", "VARIABLES", "ZERO_EXPR", "as_param", "combine",
    "differentiate", "eval_exact", "eval_numeric", "eval_tree", "is_angle",
    "is_cartesian", "is_zero", "parse", "parse_param", "parse_tree", "to_string",
    "unit_from_tangent",
]
