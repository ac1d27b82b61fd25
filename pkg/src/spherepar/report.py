"""Verification records and their deterministic JSON rendering."""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckRecord:
    id: str
    paper_tag: str
    status: str
    residual: float | None = None
    normal_form: str | None = None
    ms: float | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        d: dict[str, Any] = {"id": self.id, "paper_tag": self.paper_tag, "status": self.status}
        if self.residual is not None:
            d["residual"] = self.residual
        if self.normal_form is not None:
            d["normal_form"] = self.normal_form
        if self.detail:
            d["detail"] = self.detail
        d["ms"] = round(self.ms, 3) if (timings and self.ms is not None) else None
        return d


@dataclass
class VerificationReport:
    config: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def summary(self) -> dict[str, int]:
        return {
            "passed": sum(c.status == PASS for c in self.checks),
            "failed": sum(c.status == FAIL for c in self.checks),
            "skipped": sum(c.status == SKIPPED for c in self.checks),
        }

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "config": self.config,
            "checks": [c.to_dict(timings) for c in self.checks],
            "summary": self.summary,
        }

    def to_json(self, timings: bool = False) -> str:
        return dumps(self.to_dict(timings))

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            val = c.normal_form if c.normal_form is not None else (
                f"{c.residual:.3e}" if c.residual is not None else ""
            )
            lines.append(f"[{c.status.upper():7}] {c.id:48} {c.paper_tag:14} {val}")
        s = self.summary
        lines.append(f"passed {s['passed']}  failed {s['failed']}  skipped {s['skipped']}")
        return "\n".join(lines)


@contextmanager
def timed(record_ms: list):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        record_ms.append((time.perf_counter() - t0) * 1e3)


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats printed to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
