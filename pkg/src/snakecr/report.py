"""Deterministic JSON reports."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .symexpr import ParamField, TrigExpr

SCHEMA = "snakecr.report/1"
OUT_ENV = "SNAKECR_OUT"

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


@dataclass
class Check:
    """One verification with its measured value and tolerance."""

    id: str
    status: str
    value: Any = None
    tolerance: Any = None
    criterion: int | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_json(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "value": self.value,
            "tolerance": self.tolerance,
            "criterion": self.criterion,
            "detail": self.detail,
        }


def status(ok: bool) -> str:
    return PASS if ok else FAIL


def to_jsonable(x):
    """Convert values to JSON types: rationals as "p/q" strings, complex as [re, im]."""
    if isinstance(x, Check):
        return to_jsonable(x.as_json())
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if np.isfinite(v) else str(v)
    if isinstance(x, (complex, np.complexfloating)):
        return [to_jsonable(x.real), to_jsonable(x.imag)]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (ParamField, TrigExpr)):
        return str(x)
    if x is None or isinstance(x, str):
        return x
    if hasattr(x, "as_json"):
        return to_jsonable(x.as_json())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def build_report(command: str, parameters: dict, checks: list[Check], data: dict | None = None, **extra) -> dict:
    ids = [c.id for c in checks]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate check ids")
    rep = {
        "schema": SCHEMA,
        "tool": {"name": "snakecr", "version": __version__},
        "command": command,
        "parameters": parameters,
        "checks": [c.as_json() for c in checks],
        "summary": {
            "pass": sum(c.status == PASS for c in checks),
            "fail": sum(c.status == FAIL for c in checks),
            "indeterminate": sum(c.status == INDETERMINATE for c in checks),
        },
        "data": data or {},
    }
    rep.update(extra)
    return to_jsonable(rep)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def default_path(command: str) -> Path:
    return Path(os.environ.get(OUT_ENV, "snakecr-out")) / f"{command}.json"


def write(report: dict, path: str | os.PathLike | None, command: str) -> Path:
    p = Path(path) if path else default_path(command)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps(report), encoding="utf-8")
    return p
