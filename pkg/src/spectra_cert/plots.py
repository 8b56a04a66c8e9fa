"""Figures written next to the campaign reports."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .domination import borderline_function, domination_parameters, main_function  # noqa: E402
from .report import VerificationReport  # noqa: E402

FIGURE_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "legend.frameon": False,
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_suite_summary(reports: Sequence[VerificationReport], path: Path) -> Path:
    """Instance counts per suite, coloured by outcome."""
    with plt.rc_context(FIGURE_STYLE):
        fig, ax = plt.subplots()
        names = [r.suite for r in reports]
        counts = [max(r.instances, 1) for r in reports]
        colours = ["tab:green" if r.passed else "tab:red" for r in reports]
        ax.barh(names, counts, color=colours)
        ax.set_xscale("log")
        ax.set_xlabel("checked instances")
        ax.invert_yaxis()
        return _save(fig, path)


def plot_runner_up_separation(report: VerificationReport, path: Path) -> Path:
    """Gap between the path and the best non-path graph, per order and exponent."""
    series: dict[float, list[tuple[int, float]]] = {}
    for key, row in report.details.get("runner_up", {}).items():
        fields = dict(part.split("=") for part in key.split(","))
        series.setdefault(float(fields["p"]), []).append((int(fields["n"]), float(row["separation"])))
    with plt.rc_context(FIGURE_STYLE):
        fig, ax = plt.subplots()
        for p, pts in sorted(series.items()):
            pts.sort()
            ax.plot([n for n, _ in pts], [s for _, s in pts], marker="o", ms=3, label=f"p={p:g}")
        ax.set_yscale("log")
        ax.set_xlabel("order n")
        ax.set_ylabel("runner-up minus path")
        ax.legend(ncol=3, fontsize=7)
        return _save(fig, path)


def plot_interval_margins(report: VerificationReport, path: Path) -> Path:
    families = report.details.get("families", {})
    with plt.rc_context(FIGURE_STYLE):
        fig, ax = plt.subplots(figsize=(7.2, 4.0))
        labels = list(families)
        ax.bar(range(len(labels)), [float(families[k]["margin"]) for k in labels], color="tab:blue")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("certified minimum margin")
        return _save(fig, path)


def plot_domination_profiles(path: Path, degrees: Sequence[int] = (3, 4, 6, 10)) -> Path:
    """Profiles of the certified interval-domination differences for ``r = 1`` and the borderline case."""
    with plt.rc_context(FIGURE_STYLE):
        fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.6), sharey=False)
        for d in degrees:
            _, end = domination_parameters(d, 1)
            ts = [Fraction(k, 40) * end for k in range(41)]
            axes[0].plot([float(t) for t in ts], [float(main_function(d, 1)(t)) for t in ts], label=f"d={d}")
            _, end_b = domination_parameters(d, d - 2)
            ts_b = [Fraction(k, 40) * end_b for k in range(41)]
            axes[1].plot([float(t) for t in ts_b], [float(borderline_function(d)(t)) for t in ts_b], label=f"d={d}")
        axes[0].set_title("r = 1")
        axes[1].set_title("borderline, r = d - 2")
        for ax in axes:
            ax.axhline(0.0, color="black", lw=0.6)
            ax.set_xlabel("t")
            ax.legend(fontsize=7)
        return _save(fig, path)


def render_figures(reports: Sequence[VerificationReport], out_dir: str | Path) -> list[Path]:
    """Write every figure the given reports support; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if reports:
        written.append(plot_suite_summary(reports, out / "suite_summary.png"))
    by_name = {r.suite: r for r in reports}
    if "main_theorem" in by_name and by_name["main_theorem"].details.get("runner_up"):
        written.append(plot_runner_up_separation(by_name["main_theorem"], out / "runner_up_separation.png"))
    if "interval" in by_name:
        written.append(plot_interval_margins(by_name["interval"], out / "interval_margins.png"))
    if "domination" in by_name:
        written.append(plot_domination_profiles(out / "domination_profiles.png"))
    return written


__all__ = [
    "FIGURE_STYLE",
    "plot_domination_profiles",
    "plot_interval_margins",
    "plot_runner_up_separation",
    "plot_suite_summary",
    "render_figures",
]
