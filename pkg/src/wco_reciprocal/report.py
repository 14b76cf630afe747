"""Verification reports and their canonical serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    notes: str = ""


@dataclass
class VerificationReport:
    scenario_id: str
    checks: list[Check] = field(default_factory=list)
    quantities: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, residual: float, tolerance: float, notes: str = "") -> Check:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"duplicate check name {name!r} in report {self.scenario_id}")
        residual = float(residual)
        # NaN never passes
        check = Check(name, residual, float(tolerance), bool(residual <= tolerance), notes)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.add(prefix + c.name, c.residual, c.tolerance, c.notes)
        for k, v in other.quantities.items():
            self.quantities[prefix + k] = v

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        out = {
            "scenario_id": self.scenario_id,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    "notes": c.notes,
                }
                for c in self.checks
            ],
        }
        if self.quantities:
            out["quantities"] = self.quantities
        return out

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario_id}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            flag = "pass" if c.passed else "FAIL"
            line = f"  [{flag}] {c.name}  residual={c.residual:.3e}  tol={c.tolerance:.1e}"
            if c.notes:
                line += f"  ({c.notes})"
            lines.append(line)
        return "\n".join(lines)


def tolerance(overrides: Mapping[str, float] | None, name: str, default: float = DEFAULT_TOL) -> float:
    if overrides and name in overrides:
        return float(overrides[name])
    return default


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0.0:
        # collapse -0.0 so reports diff cleanly
        x = 0.0
    return format(x, ".16e")


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_float(obj.real)}, {format_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _emit(obj.tolist(), indent, level)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in obj) or all(
            isinstance(v, (complex, np.complexfloating)) for v in obj
        ):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Canonical JSON: insertion key order, floats as 17 significant digits.

    Complex numbers become ``[re, im]`` pairs; non-finite floats become the
    strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    return _emit(obj, indent, 0) + "\n"
