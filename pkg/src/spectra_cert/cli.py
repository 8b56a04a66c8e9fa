"""Command-line entry point: ``spectra-cert``."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import campaigns
from . import spectral as sp
from .config import CampaignConfig, ConfigError, load_config
from .domination import certify_interval_domination
from .enumerate import enumerate_connected
from .formats import FormatError, from_graph6, read_graph6_lines, to_edge_list, to_graph6
from .graph import Graph, GraphError
from .report import RENDERERS, emit_report
from .transforms import bipartition_of


@click.group()
def main() -> None:
    """Certified spectral extremal checks for small graphs."""


@main.command("run")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON campaign configuration; defaults apply to omitted keys.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Override the configured output directory.")
@click.option("--no-plots", is_flag=True, help="Skip the figure files.")
def run_cmd(config_path: str | None, out_dir: str | None, no_plots: bool) -> None:
    """Run the selected suites and write reports; exit 0 iff every suite passes."""
    try:
        cfg = load_config(config_path) if config_path else CampaignConfig()
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    reports = campaigns.run(cfg)
    target = Path(out_dir or cfg.output_dir)
    for fmt in cfg.formats:
        path = emit_report(reports, fmt, target / f"report.{fmt}")
        click.echo(f"wrote {path}")
    if cfg.plots and not no_plots:
        from .plots import render_figures

        for path in render_figures(reports, target):
            click.echo(f"wrote {path}")
    for r in reports:
        click.echo(r.summary_line())
    sys.exit(0 if all(r.passed for r in reports) else 1)


def _spectra_row(g: Graph, p: float, t: float | None) -> dict:
    spec = sp.adjacency_spectrum(g)
    signed = sp.signed_from_values(spec.values, spec.err, p)
    row = {
        "graph6": to_graph6(g),
        "n": g.n,
        "m": g.m,
        "eigenvalues": list(spec.values),
        "err": spec.err,
        "p": p,
        "p_energy": float(sp.p_energy_from_values(spec.values, spec.err, p)),
        "positive_p_energy": float(signed.positive),
        "bipartite": False,
    }
    bip = bipartition_of(g)
    if bip is not None and g.is_connected():
        mu = sp.mu_values(g, bip)
        row["bipartite"] = True
        row["mu_values"] = list(mu.values)
        if t is not None:
            row["stoploss"] = float(sp.stoploss_values(mu.values, mu.err, t))
    return row


@main.command("spectra")
@click.option("--graph6", "graph6", default=None, help="Graph in graph6 encoding.")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File with one graph6 string per line.")
@click.option("--p", "p", type=float, default=2.0, show_default=True, help="Energy exponent.")
@click.option("--t", "t", type=float, default=None, help="Stop-loss level for bipartite graphs.")
def spectra_cmd(graph6: str | None, input_path: str | None, p: float, t: float | None) -> None:
    """Print spectra and energies, one JSON object per graph."""
    if (graph6 is None) == (input_path is None):
        raise click.UsageError("give exactly one of --graph6 or --input")
    try:
        if graph6 is not None:
            graphs = [from_graph6(graph6)]
        else:
            with open(input_path) as fh:
                graphs = list(read_graph6_lines(fh))
    except FormatError as exc:
        raise click.ClickException(str(exc)) from exc
    except GraphError as exc:
        raise click.ClickException(f"invalid graph6 input: {exc}") from exc
    for g in graphs:
        click.echo(json.dumps(_spectra_row(g, p, t), sort_keys=True))


@main.command("certify-bernstein")
@click.option("--json", "as_json", is_flag=True, help="Emit the full certificate as JSON.")
def certify_bernstein_cmd(as_json: bool) -> None:
    """Exact Bernstein certificates and polynomial identities for the scalar envelopes."""
    from .bernstein import run_envelope_certificates

    report = run_envelope_certificates()
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        for c in report.certificates:
            op = ">" if c.strict else ">="
            status = "PASS" if c.passed else "FAIL"
            click.echo(f"{status} {c.poly_name} on [{c.interval[0]}, {c.interval[1]}]: "
                       f"min Bernstein coefficient {c.min_coeff} {op} {c.bound}")
        for i in report.identities:
            click.echo(f"{'PASS' if i.passed else 'FAIL'} identity {i.name}" + (f": {i.detail}" if i.detail else ""))
    sys.exit(0 if report.passed else 1)


@main.command("certify-interval")
@click.option("--prec", type=click.IntRange(min=53), default=256, show_default=True,
              help="Working precision in bits.")
def certify_interval_cmd(prec: int) -> None:
    """Adaptive ball-arithmetic certification of the strip and box families."""
    report, outcomes = campaigns.run_interval_suite(prec)
    for o in outcomes:
        click.echo(o.log_line)
    for o in outcomes:
        click.echo(f"{o.label}: reference boxes/depth match={o.matches_reference_counts}, "
                   f"margin digits vs reference={o.digits:.2f}")
    click.echo(report.summary_line())
    sys.exit(0 if report.passed else 1)


@main.command("certify-domination")
@click.option("--dmax", type=click.IntRange(3, 40), default=40, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the summary as JSON.")
def certify_domination_cmd(dmax: int, as_json: bool) -> None:
    """Exact piecewise Bernstein certification of the interval-domination inequalities."""
    report = certify_interval_domination(dmax)
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        click.echo(f"certificates={len(report.certificates)} pieces={report.piece_count} passed={report.passed}")
        for name, zero in report.equality_cases():
            click.echo(f"exact zero: {name} at t={zero}")
        for c in report.failures:
            click.echo(f"FAIL {c.name}")
    sys.exit(0 if report.passed else 1)


@main.command("enumerate")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--class", "kind", type=click.Choice(["all", "trees", "bipartite"]), default="all",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["graph6", "edgelist"]), default="graph6",
              show_default=True)
def enumerate_cmd(n: int, kind: str, fmt: str) -> None:
    """List one representative per isomorphism class of connected graphs."""
    try:
        graphs = list(enumerate_connected(n, kind))
    except GraphError as exc:
        raise click.ClickException(str(exc)) from exc
    for g in graphs:
        if fmt == "graph6":
            click.echo(to_graph6(g))
        else:
            click.echo(to_edge_list(g), nl=False)
            click.echo("")


__all__ = ["main", "RENDERERS"]
