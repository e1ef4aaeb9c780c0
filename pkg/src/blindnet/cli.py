"""Command-line entry points.

Synthetic runs go through a versioned YAML config (`experiment`); the other
subcommands cover the pieces: sample a graph, push dynamics through it,
recover a partition, estimate the affinity scale, or score a real network
against known communities.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import experiments
from .dynamics import FilterSpec, InitDistribution, simulate_snapshots, normalized_adjacency
from .estimation import estimate_a_eigenvalue, estimate_a_partition
from .model import build_planted, sample_graph
from .recovery import recover_partition
from .spectral import covariance_spectrum, sample_covariance


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip() != "")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip() != "")


@click.group()
def main():
    """Blind recovery of block structure from diffusion snapshots."""


@main.command("generate-graph")
@click.option("--n", type=int, required=True, help="Number of nodes.")
@click.option("--k", type=int, required=True, help="Number of groups.")
@click.option("--a", type=float, required=True, help="Within-group rate (a/n).")
@click.option("--b", type=float, required=True, help="Cross-group rate (b/n).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True,
              help="Edge-list destination.")
@click.option("--labels-output", type=click.Path(dir_okay=False), default=None,
              help="Optional ground-truth labels destination.")
def generate_graph(n, k, a, b, seed, output, labels_output):
    """Sample a planted-partition graph and write its edge list."""
    try:
        model = build_planted(n, k, a, b)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    graph = sample_graph(model, seed)
    upper = graph.adjacency.tocoo()
    with open(output, "w", encoding="utf-8") as fh:
        for u, v in zip(upper.row, upper.col):
            if u <= v:
                fh.write(f"{u} {v}\n")
    if labels_output is not None:
        labels = model.labels()
        with open(labels_output, "w", encoding="utf-8") as fh:
            for node, label in enumerate(labels):
                fh.write(f"{node} {label}\n")
    click.echo(f"wrote {graph.adjacency.nnz // 2} edges on {graph.n} nodes to {output}")


@main.command()
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--indexing", type=click.IntRange(0, 1), default=0, show_default=True,
              help="Id of the first node in the edge file.")
@click.option("--coeffs", default="1.0", show_default=True,
              help="Comma-separated filter coefficients.")
@click.option("--t", "horizon", type=int, required=True, help="Diffusion steps.")
@click.option("--s", type=int, required=True, help="Number of trajectories.")
@click.option("--dist", type=click.Choice([d.value for d in InitDistribution]),
              default="gaussian", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True,
              help="Snapshot archive (.npz).")
def simulate(edges, indexing, coeffs, horizon, s, dist, seed, output):
    """Simulate diffusion snapshots on a graph loaded from an edge list."""
    try:
        graph = experiments.load_edge_list(edges, indexing)
        operator = normalized_adjacency(graph)
        snapshots = simulate_snapshots(
            operator, FilterSpec(_parse_floats(coeffs)), horizon, s,
            InitDistribution(dist), seed,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    np.savez(
        output,
        data=snapshots.data,
        horizon=snapshots.horizon,
        metadata=json.dumps(snapshots.metadata, sort_keys=True),
    )
    click.echo(f"wrote {snapshots.n}x{snapshots.s} snapshots (T={horizon}) to {output}")


def _load_snapshots(path):
    from .dynamics import SnapshotSet

    with np.load(path) as archive:
        return SnapshotSet(
            data=np.asarray(archive["data"], dtype=np.float64),
            horizon=int(archive["horizon"]),
            metadata=json.loads(str(archive["metadata"])),
        )


@main.command()
@click.option("--snapshots", "snapshots_path",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", type=int, required=True, help="Number of groups.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--restarts", type=int, default=10, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Label file destination (node label per line).")
def recover(snapshots_path, k, seed, restarts, output):
    """Recover a k-group partition from simulated snapshots."""
    snapshots = _load_snapshots(snapshots_path)
    try:
        part = recover_partition(snapshots, k, seed, restarts)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if output is not None:
        with open(output, "w", encoding="utf-8") as fh:
            for node, label in enumerate(part.labels):
                fh.write(f"{node} {label}\n")
    diag = part.diagnostics
    click.echo(f"objective={diag['objective']:.6g} "
               f"zero_rows={len(diag['zero_rows'])} "
               f"rank_deficient={diag['rank_deficient']} "
               f"no_spectral_gap={diag['no_spectral_gap']}")
    if output is None:
        click.echo(" ".join(str(int(l)) for l in part.labels))


@main.command()
@click.option("--snapshots", "snapshots_path",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--rho", type=float, required=True,
              help="Known edge density (a + b) / (2n).")
@click.option("--method", type=click.Choice(["eigenvalue", "partition"]),
              default="eigenvalue", show_default=True)
@click.option("--labels", "labels_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Partition file for the partition method "
              "(recovered from the snapshots when omitted).")
@click.option("--indexing", type=click.IntRange(0, 1), default=0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def estimate(snapshots_path, rho, method, labels_path, indexing, seed):
    """Estimate the within-group rate a of a two-group planted partition."""
    snapshots = _load_snapshots(snapshots_path)
    horizon = snapshots.horizon
    try:
        if method == "eigenvalue":
            pairs = covariance_spectrum(snapshots, 2)
            result = estimate_a_eigenvalue(
                float(pairs.values[1]), horizon, rho, snapshots.n
            )
        else:
            if labels_path is not None:
                mapping = experiments.load_labels(labels_path, indexing)
                labels = np.array([mapping.get(node, -1) for node in range(snapshots.n)])
                if (labels < 0).any():
                    raise ValueError("labels file does not cover every node")
            else:
                labels = recover_partition(snapshots, 2, seed).labels
            result = estimate_a_partition(
                sample_covariance(snapshots), horizon, labels, rho, snapshots.n
            )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"a_hat={result.a_hat!r} method={result.method} "
               f"T={result.horizon} clamped={result.clamped}")


@main.command()
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Override the config's output path.")
@click.option("--seed", type=int, default=None, help="Override the config's seed.")
@click.option("--workers", type=int, default=None,
              help="Override the config's worker count.")
def experiment(config_path, output, seed, workers):
    """Run a sweep config and write the results CSV."""
    try:
        config = experiments.load_config(config_path)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if output is not None:
        config.output = output
    if seed is not None:
        config.seed = seed
    if workers is not None:
        config.workers = workers
    rows = experiments.run_experiment(config)
    failures = sum(1 for row in rows if row.get("error"))
    if config.output:
        click.echo(f"wrote {len(rows)} rows to {config.output}"
                   + (f" ({failures} failed)" if failures else ""))
    for metric in ("Z", "eta_eig", "eta_part"):
        for line in experiments.summarize(rows, metric):
            click.echo(line)
    if failures:
        first = next(row["error"] for row in rows if row.get("error"))
        click.echo(f"first error: {first}", err=True)


@main.command()
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--labels", "labels_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--karate", is_flag=True, help="Use the bundled 34-node network.")
@click.option("--indexing", type=click.IntRange(0, 1), default=0, show_default=True)
@click.option("--lcc", is_flag=True, help="Keep only the largest connected component.")
@click.option("--t-list", default="1,2,3,4,5", show_default=True,
              help="Comma-separated diffusion horizons.")
@click.option("--s-list", default="50", show_default=True,
              help="Comma-separated trajectory counts.")
@click.option("--replicates", type=int, default=10, show_default=True)
@click.option("--coeffs", default="1.0", show_default=True)
@click.option("--dist", type=click.Choice([d.value for d in InitDistribution]),
              default="gaussian", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True)
def realworld(edges, labels_path, karate, indexing, lcc, t_list, s_list,
              replicates, coeffs, dist, seed, output):
    """Score snapshot-based recovery against known communities on a real graph."""
    try:
        if karate:
            graph, label_array = experiments.karate_club()
        else:
            if edges is None or labels_path is None:
                raise ValueError("--edges and --labels are required without --karate")
            graph = experiments.load_edge_list(edges, indexing)
            mapping = experiments.load_labels(labels_path, indexing)
            graph, label_array, _ = experiments.restrict_graph(graph, mapping, lcc)
        rows = experiments.run_realworld(
            graph, label_array, _parse_ints(t_list), _parse_ints(s_list),
            replicates, seed, coeffs=_parse_floats(coeffs),
            init=InitDistribution(dist),
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    experiments.write_rows(output, rows)
    click.echo(f"wrote {len(rows)} rows to {output}")
    for metric in ("Z", "z_spectral"):
        for line in experiments.summarize(rows, metric):
            click.echo(line)


if __name__ == "__main__":
    main(sys.argv[1:])
