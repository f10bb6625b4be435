"""Command-line entry points for experiments and the live service."""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import harness


@click.group()
def main():
    """Frost Hollow experiments and real-time play service."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Experiment config JSON.")
@click.option("--out", "out_dir", default="results", show_default=True,
              help="Output directory for CSV and summary files.")
@click.option("--workers", default=1, show_default=True,
              help="Parallel worker processes.")
@click.option("--trace", is_flag=True,
              help="Also write per-step episode traces (JSON lines).")
def run(config_path, out_dir, workers, trace):
    """Run one experiment config."""
    cfg = harness.load_config(config_path)
    summary = harness.run_and_save(cfg, out_dir, workers=workers, trace=trace)
    a = summary["asymptotic"]
    click.echo(f"{cfg.name}: asymptotic mean {a['mean']:.3f} "
               f"median {a['median']:.3f} over {a['n_runs']} runs")


@main.command()
@click.option("--grid", "grid_path", type=click.Path(exists=True),
              help="JSON list of experiment configs; defaults to the full "
                   "built-in comparison grid.")
@click.option("--out", "out_dir", default="results", show_default=True)
@click.option("--workers", default=1, show_default=True)
@click.option("--runs", default=30, show_default=True,
              help="Runs per config when using the built-in grid.")
@click.option("--episodes", default=5000, show_default=True,
              help="Episodes per run when using the built-in grid.")
def sweep(grid_path, out_dir, workers, runs, episodes):
    """Run a grid of experiment configs."""
    if grid_path:
        entries = json.loads(Path(grid_path).read_text())
        configs = [harness.config_from_dict(d) for d in entries]
    else:
        configs = harness.default_sweep(n_runs=runs, n_episodes=episodes)
    for cfg in configs:
        summary = harness.run_and_save(cfg, out_dir, workers=workers)
        a = summary["asymptotic"]
        click.echo(f"{cfg.name}: mean {a['mean']:.3f} median {a['median']:.3f}")


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True),
              help="Directory of result CSVs from run/sweep.")
@click.option("--window", default="asymptotic", show_default=True,
              type=click.Choice(["early", "asymptotic"]))
def summarize(in_dir, window):
    """Summarize result CSVs in a directory."""
    paths = sorted(Path(in_dir).glob("*.csv"))
    if not paths:
        raise click.ClickException(f"no CSV files in {in_dir}")
    for path in paths:
        records = harness.read_csv(path)
        s = harness.summarize(records, window)
        click.echo(f"{path.stem}: mean {s['mean']:.3f} median {s['median']:.3f} "
                   f"q1 {s['q1']:.3f} q3 {s['q3']:.3f} "
                   f"ci95 [{s['ci95'][0]:.3f}, {s['ci95'][1]:.3f}]")


@main.command()
@click.option("--repr", "repr_name", default="bc", show_default=True,
              type=click.Choice(["bias", "bc", "tct"]))
@click.option("--question", default="countdown", show_default=True,
              type=click.Choice(["accumulation", "countdown"]))
@click.option("--alpha", default=0.1, show_default=True)
@click.option("--isi", default=8, show_default=True)
@click.option("--stim", default=2, show_default=True)
@click.option("--cycles", default=100, show_default=True)
def probe(repr_name, question, alpha, isi, stim, cycles):
    """Train a co-agent alone on a fixed schedule; report prediction error."""
    co_cfg = harness.CoagentConfig(kind="pavlovian", repr=repr_name,
                                   question=question, alpha=alpha)
    coagent = harness.build_coagent(co_cfg)
    report = harness.prediction_probe(coagent, isi=isi, stim_len=stim,
                                      n_cycles=cycles)
    errs = report["per_cycle_max_err"]
    click.echo(f"cycle length {report['cycle_length']}; "
               f"max error by cycle 1/10/last: "
               f"{errs[0]:.3f} / {errs[min(9, len(errs) - 1)]:.3f} / {errs[-1]:.3f}")
    click.echo(f"pre-onset slope (converged): {report['preonset_slope']:+.3f}")
    for phase, (v, ideal) in enumerate(zip(report["final_cycle"], report["ideal"])):
        click.echo(f"  phase {phase:2d}: V {v:7.3f}  ideal {ideal:7.3f}")


@main.command()
@click.option("--port", default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="Session config JSON; defaults apply when omitted.")
@click.option("--log-dir", default="trial_logs", show_default=True,
              help="Directory for per-trial JSON-lines logs.")
def live(port, host, config_path, log_dir):
    """Serve real-time Frost Hollow sessions over a websocket."""
    from .live.server import serve, session_config_from_dict

    cfg = None
    if config_path:
        cfg = session_config_from_dict(json.loads(Path(config_path).read_text()))
    serve(host=host, port=port, config=cfg, log_dir=log_dir)
