"""Machine-readable verification reports (schema "harnesslab/1")."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .scalars import fmt, is_exact

SCHEMA_ID = "harnesslab/1"

_residual = {"type": ["string", "number", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "suite", "mode", "params", "truncation", "checks", "passed"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "suite": {"type": "string"},
        "mode": {"enum": ["exact", "float"]},
        "params": {
            "type": "object",
            "required": ["q", "eta", "theta", "sigma", "tau"],
            "additionalProperties": {"type": ["string", "number"]},
        },
        "truncation": {
            "type": "object",
            "additionalProperties": {"type": "integer"},
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skip"]},
                    "residual": _residual,
                    "tolerance": {"type": ["number", "null"]},
                    "detail": {"type": "string"},
                },
            },
        },
        "passed": {"type": "boolean"},
        "elapsed_s": {"type": "number"},
    },
}


def residual_value(v):
    """Exact residuals as "p/q" strings, float residuals as magnitudes."""
    if v is None:
        return None
    if is_exact(v):
        return fmt(abs(v))
    return abs(float(v))


@dataclass
class Check:
    name: str
    status: str
    residual: object = None
    tolerance: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "residual": residual_value(self.residual)}
        if self.tolerance is not None:
            d["tolerance"] = self.tolerance
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    suite: str
    mode: str
    params: dict
    truncation: dict
    checks: list = field(default_factory=list)
    elapsed_s: float | None = None

    def add(self, name, ok, residual=None, tolerance=None, detail="") -> Check:
        c = Check(name, "pass" if ok else "fail", residual, tolerance, detail)
        self.checks.append(c)
        return c

    def skip(self, name, detail="") -> Check:
        c = Check(name, "skip", None, None, detail)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA_ID,
            "suite": self.suite,
            "mode": self.mode,
            "params": self.params,
            "truncation": self.truncation,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }
        if self.elapsed_s is not None:
            d["elapsed_s"] = round(self.elapsed_s, 3)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"
