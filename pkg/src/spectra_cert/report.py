"""Verification reports and their JSON, CSV and Markdown renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

GRID_NOTE = (
    "Desk-scale substitute: statements over continuous parameters and all orders are "
    "checked on finite grids and enumerated graphs only."
)


def _plain(value: Any) -> Any:
    """JSON-safe rendering; rationals become exact strings, floats keep 17 digits."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return float(f"{value:.17g}")
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


@dataclass
class Failure:
    graph6: str
    param: Any
    lhs: Any
    rhs: Any
    margin: Any

    def to_json(self) -> dict:
        return {k: _plain(getattr(self, k)) for k in ("graph6", "param", "lhs", "rhs", "margin")}


@dataclass
class NearEquality:
    graph6: str
    param: Any
    difference: Any
    method: str
    resolved: bool
    equal: bool

    def to_json(self) -> dict:
        return {k: _plain(getattr(self, k)) for k in ("graph6", "param", "difference", "method", "resolved", "equal")}


@dataclass
class VerificationReport:
    suite: str
    config: dict = field(default_factory=dict)
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)
    near_equalities: list[NearEquality] = field(default_factory=list)
    runtime_ms: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, graph6: str, param, lhs, rhs, margin) -> None:
        self.failures.append(Failure(graph6, param, lhs, rhs, margin))

    def merge(self, other: "VerificationReport", prefix: str = "") -> None:
        self.instances += other.instances
        self.failures.extend(other.failures)
        self.near_equalities.extend(other.near_equalities)
        if other.details:
            self.details[prefix or other.suite] = other.details

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": _plain(self.config),
            "instances": self.instances,
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
            "near_equalities": [n.to_json() for n in self.near_equalities],
            "details": _plain(self.details),
            "note": GRID_NOTE,
            "runtime_ms": self.runtime_ms,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.suite}: instances={self.instances} failures={len(self.failures)} "
                f"near_equalities={len(self.near_equalities)} runtime_ms={self.runtime_ms}")


def render_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True) + "\n"


def render_csv(reports: list[VerificationReport]) -> str:
    """One row per suite followed by one row per failure."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "suite", "instances", "passed", "graph6", "param", "lhs", "rhs", "margin"])
    for r in reports:
        writer.writerow(["suite", r.suite, r.instances, r.passed, "", "", "", "", ""])
        for f in r.failures:
            j = f.to_json()
            writer.writerow(["failure", r.suite, "", "", j["graph6"], json.dumps(j["param"]), j["lhs"], j["rhs"], j["margin"]])
    return buf.getvalue()


def render_markdown(reports: list[VerificationReport]) -> str:
    lines = [
        "| suite | instances | failures | near equalities | runtime (ms) | status |",
        "|---|---:|---:|---:|---:|---|",
    ]
    for r in reports:
        lines.append(f"| {r.suite} | {r.instances} | {len(r.failures)} | {len(r.near_equalities)} "
                     f"| {r.runtime_ms} | {'pass' if r.passed else 'FAIL'} |")
    failing = [(r.suite, f) for r in reports for f in r.failures]
    if failing:
        lines += ["", "| suite | graph6 | param | lhs | rhs | margin |", "|---|---|---|---|---|---|"]
        for suite, f in failing:
            j = f.to_json()
            lines.append(f"| {suite} | `{j['graph6']}` | {j['param']} | {j['lhs']} | {j['rhs']} | {j['margin']} |")
    lines += ["", GRID_NOTE]
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "md": render_markdown}


def emit_report(reports: list[VerificationReport], fmt: str, path: str | Path) -> Path:
    if fmt not in RENDERERS:
        raise ValueError(f"unknown report format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(RENDERERS[fmt](reports))
    return path


__all__ = [
    "Failure",
    "GRID_NOTE",
    "NearEquality",
    "VerificationReport",
    "emit_report",
    "render_csv",
    "render_json",
    "render_markdown",
]
