"""Campaign configuration: defaults, JSON loading and validation."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .enumerate import DEFAULT_CAPS, DEFAULT_EDGE_CAP

SUITES = ("main", "stoploss", "r1", "deletion", "applications", "matching", "bernstein", "interval", "domination")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key or line."""


def _default_t_grid() -> list[float]:
    return [k / 4 for k in range(21)]


@dataclass
class CampaignConfig:
    # largest order per campaign; each is checked against the enumeration caps
    n_max: dict[str, int] = field(default_factory=lambda: {
        "main": 8,
        "stoploss": 9,
        "r1": 8,
        "r1_vertex_gain": 7,
        "deletion": 8,
        "applications": 8,
        "vertex_gain": 7,
        "edges": 10,
        "square_energy_edges": 9,
    })
    p_grid: list[float] = field(default_factory=lambda: [2, 2.1, 2.5, 3, 3.5, 4, 4.5, 5, 6.5])
    t_grid: list[float] = field(default_factory=_default_t_grid)
    x_grid: list[str] = field(default_factory=lambda: ["1/16", "1/4", "1", "4", "16"])
    kappa: float = 4.0
    separation: float = 1e-6
    threads: int | None = None
    output_dir: str = "reports"
    formats: list[str] = field(default_factory=lambda: ["json", "csv", "md"])
    plots: bool = True
    suites: dict[str, bool] = field(default_factory=lambda: {s: True for s in SUITES})
    cycle_max: int = 60
    splice_max: int = 40
    d_max: int = 40
    interval_prec: int = 256

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for name in ("p_grid", "t_grid", "x_grid"):
            grid = getattr(self, name)
            if not grid:
                raise ConfigError(f"{name} must be non-empty")
            values = [Fraction(v) for v in grid]
            if values != sorted(values):
                raise ConfigError(f"{name} must be sorted")
        if any(Fraction(p) < 2 for p in self.p_grid):
            raise ConfigError("p_grid must lie in [2, inf)")
        if any(not 0 <= Fraction(t) <= 5 for t in self.t_grid):
            raise ConfigError("t_grid must lie in [0, 5]")
        if any(Fraction(x) <= 0 for x in self.x_grid):
            raise ConfigError("x_grid must be positive")
        caps = {"main": "all", "applications": "all", "vertex_gain": "all", "stoploss": "bipartite",
                "r1": "bipartite", "r1_vertex_gain": "bipartite", "deletion": "bipartite"}
        for key, value in self.n_max.items():
            if key in ("edges", "square_energy_edges"):
                if not 1 <= value <= DEFAULT_EDGE_CAP:
                    raise ConfigError(f"n_max[{key!r}]={value} outside 1..{DEFAULT_EDGE_CAP}")
            elif key in caps:
                if not 1 <= value <= DEFAULT_CAPS[caps[key]]:
                    raise ConfigError(f"n_max[{key!r}]={value} outside the enumeration cap")
            else:
                raise ConfigError(f"unknown n_max key {key!r}")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ConfigError(f"unknown suites {sorted(unknown)}")
        if set(self.formats) - {"json", "csv", "md"}:
            raise ConfigError("formats must be drawn from json, csv, md")
        if not 1 <= self.d_max <= 40:
            raise ConfigError("d_max must lie in 1..40")
        if self.kappa <= 0:
            raise ConfigError("kappa must be positive")

    def selected(self, suite: str) -> bool:
        return bool(self.suites.get(suite, False))

    def worker_count(self) -> int:
        env = os.environ.get("SPECTRA_CERT_THREADS")
        if env:
            return max(1, int(env))
        if self.threads:
            return max(1, int(self.threads))
        return os.cpu_count() or 1

    def to_json(self) -> dict:
        return asdict(self)


def config_from_dict(data: dict) -> CampaignConfig:
    known = {f.name for f in fields(CampaignConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    base = CampaignConfig()
    merged = {}
    for key, value in data.items():
        if key in ("n_max", "suites") and isinstance(value, dict):
            current = dict(getattr(base, key))
            if key == "suites":
                current = {s: False for s in SUITES}
            current.update(value)
            merged[key] = current
        else:
            merged[key] = value
    try:
        return CampaignConfig(**{**asdict(base), **merged})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> CampaignConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    return config_from_dict(data)


__all__ = ["CampaignConfig", "ConfigError", "SUITES", "config_from_dict", "load_config"]
