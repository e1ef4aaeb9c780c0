"""Sweep configs, the experiment runner, CSV output, and graph loaders.

Determinism contract: a replicate's seed is derived from
``(base seed, grid index, replicate index)``, grid points enumerate in a
fixed axis order, and rows are sorted before writing. Re-running a config
with the same seed therefore reproduces the output byte for byte, no matter
how work was scheduled.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import os
import tempfile
import time
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
import yaml
from scipy.sparse import csgraph

from . import _seeds, bounds
from .dynamics import (
    FilterSpec,
    InitDistribution,
    normalized_adjacency,
    simulate_snapshots,
)
from .estimation import estimate_a_eigenvalue, estimate_a_partition, relative_error
from .model import (
    DENSE_NODE_LIMIT,
    Graph,
    PlantedPartitionParams,
    SbmModel,
    build_planted,
    expected_degrees,
    expected_spectral_embedding,
    normalized_affinity_spectrum,
    params_from_snr,
    sample_graph,
    snr_of,
)
from .recovery import (
    misclassification_rate,
    overlap_score,
    recover_from_covariance,
    recover_partition,
)
from .spectral import sample_covariance

CSV_SIGNATURE = "# blindnet-results v1"
COLUMNS = (
    "n",
    "k",
    "a",
    "b",
    "snr",
    "s",
    "T",
    "replicate",
    "seed",
    "Z",
    "z_spectral",
    "q",
    "eta_eig",
    "eta_part",
    "lambda_gap",
    "bound_M",
    "bound_B",
    "q_bound",
    "eta_bound",
    "wall_time",
    "error",
)
AXES = ("n", "k", "snr", "a", "b", "s", "T")
METRICS = ("overlap", "misclassification", "eta_eig", "eta_part", "bounds")

_CONFIG_KEYS = {
    "version",
    "seed",
    "replicates",
    "output",
    "workers",
    "init",
    "filter",
    "metrics",
    "eps",
    "C",
    "timing",
    "allow_large",
    "model",
    "sweep",
}


@dataclass
class ExperimentConfig:
    seed: int
    model: dict
    sweep: dict
    replicates: int = 1
    output: Optional[str] = None
    workers: int = 1
    init: InitDistribution = InitDistribution.GAUSSIAN
    filter_coeffs: tuple[float, ...] = (1.0,)
    metrics: tuple[str, ...] = ("overlap",)
    eps: float = 0.05
    C: float = 1.0
    timing: bool = False
    allow_large: bool = False


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a version-1 YAML sweep config."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return parse_config(raw)


def parse_config(raw) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ValueError("config must be a mapping")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for required in ("version", "seed", "model", "sweep"):
        if required not in raw:
            raise ValueError(f"config is missing required field '{required}'")
    if raw["version"] != 1:
        raise ValueError(f"unsupported config version {raw['version']!r}")
    sweep = raw["sweep"]
    if not isinstance(sweep, dict) or not sweep:
        raise ValueError("field 'sweep' must be a non-empty mapping")
    for axis in sweep:
        if axis not in AXES:
            raise ValueError(f"unknown sweep axis '{axis}' (allowed: {AXES})")
    sweep = {
        axis: [sweep[axis]] if np.isscalar(sweep[axis]) else list(sweep[axis])
        for axis in sweep
    }
    for axis in ("T", "s"):
        if axis not in sweep:
            raise ValueError(f"sweep must include axis '{axis}'")
    metrics = tuple(raw.get("metrics", ["overlap"]))
    for metric in metrics:
        if metric not in METRICS:
            raise ValueError(f"unknown metric '{metric}' (allowed: {METRICS})")
    init = raw.get("init", "gaussian")
    try:
        init = InitDistribution(init)
    except ValueError:
        raise ValueError(f"field 'init' must be one of "
                         f"{[d.value for d in InitDistribution]}, got {init!r}")
    model = raw["model"]
    if not isinstance(model, dict) or "kind" not in model:
        raise ValueError("field 'model' must be a mapping with a 'kind'")
    if model["kind"] not in ("planted", "explicit"):
        raise ValueError(f"unknown model kind {model['kind']!r}")
    replicates = int(raw.get("replicates", 1))
    if replicates < 1:
        raise ValueError("field 'replicates' must be >= 1")
    return ExperimentConfig(
        seed=int(raw["seed"]),
        model=model,
        sweep=sweep,
        replicates=replicates,
        output=raw.get("output"),
        workers=int(raw.get("workers", 1)),
        init=init,
        filter_coeffs=tuple(raw.get("filter", [1.0])),
        metrics=metrics,
        eps=float(raw.get("eps", 0.05)),
        C=float(raw.get("C", 1.0)),
        timing=bool(raw.get("timing", False)),
        allow_large=bool(raw.get("allow_large", False)),
    )


def sweep_grid(config: ExperimentConfig) -> list[dict]:
    """Grid points in canonical axis order (row-major over AXES)."""
    axes = [axis for axis in AXES if axis in config.sweep]
    points = []
    for combo in product(*(config.sweep[axis] for axis in axes)):
        points.append(dict(zip(axes, combo)))
    return points


def _resolve_model(
    model_cfg: dict, point: dict
) -> tuple[SbmModel, Optional[PlantedPartitionParams]]:
    kind = model_cfg["kind"]
    if kind == "explicit":
        for axis in ("n", "k", "snr", "a", "b"):
            if axis in point:
                raise ValueError(f"axis '{axis}' cannot be swept for explicit models")
        model = SbmModel(
            group_sizes=tuple(model_cfg["sizes"]),
            affinity=np.asarray(model_cfg["omega"], dtype=np.float64),
        )
        return model, None
    n = int(point.get("n", model_cfg.get("n", 0)))
    k = int(point.get("k", model_cfg.get("k", 0)))
    if n <= 0 or k <= 0:
        raise ValueError("planted model needs positive 'n' and 'k'")
    a = point.get("a", model_cfg.get("a"))
    b = point.get("b", model_cfg.get("b"))
    snr = point.get("snr", model_cfg.get("snr"))
    if a is not None and b is not None:
        params = PlantedPartitionParams(n=n, k=k, a=float(a), b=float(b))
    elif snr is not None:
        mean_degree = model_cfg.get("mean_degree")
        if mean_degree is None:
            raise ValueError("model.mean_degree is required when sweeping snr")
        params = params_from_snr(n, k, float(snr), float(mean_degree))
    else:
        raise ValueError("planted model needs (a, b) or an snr value")
    return build_planted(n, k, params.a, params.b), params


def _blank_row() -> dict:
    return {column: "" for column in COLUMNS}


def run_replicate(config: ExperimentConfig, point: dict, grid_index: int,
                  replicate: int) -> dict:
    """One grid-point replicate; failures land in the error column."""
    row = _blank_row()
    row["replicate"] = replicate
    row["T"] = point.get("T", "")
    row["s"] = point.get("s", "")
    seed = _seeds.derive_seed(config.seed, _seeds.REPLICATE, grid_index, replicate)
    row["seed"] = seed
    started = time.perf_counter()
    try:
        model, params = _resolve_model(config.model, point)
        n, k = model.n, model.k
        if n > DENSE_NODE_LIMIT and not config.allow_large:
            raise ValueError(
                f"n={n} exceeds the desk-scale limit {DENSE_NODE_LIMIT}; "
                "set allow_large: true to override"
            )
        row["n"] = n
        row["k"] = k
        if params is not None:
            row["a"] = params.a
            row["b"] = params.b
            row["snr"] = point.get("snr", snr_of(params))
        horizon = int(point["T"])
        s = int(point["s"])
        spec = FilterSpec(config.filter_coeffs)
        graph = sample_graph(model, seed)
        operator = normalized_adjacency(graph)
        snapshots = simulate_snapshots(
            operator, spec, horizon, s, config.init, seed, check_norm=False
        )
        truth = model.labels()
        part = recover_partition(snapshots, k, seed)
        if "overlap" in config.metrics:
            row["Z"] = overlap_score(part.labels, truth)
        values_all = part.eigen.values_all
        if values_all is not None and values_all.shape[0] > k:
            magnitudes = np.abs(values_all)
            row["lambda_gap"] = float(magnitudes[k - 1] - magnitudes[k])
        if "misclassification" in config.metrics:
            _, population = expected_spectral_embedding(model)
            report = misclassification_rate(part.embedding, population, part.kmeans)
            row["q"] = report.rate
        if params is not None and k == 2:
            rho = (params.a + params.b) / (2.0 * n)
            if "eta_eig" in config.metrics:
                est = estimate_a_eigenvalue(
                    float(part.eigen.values[1]), horizon, rho, n
                )
                row["eta_eig"] = relative_error(est.a_hat, params.a)
            if "eta_part" in config.metrics:
                est = estimate_a_partition(
                    sample_covariance(snapshots), horizon, truth, rho, n
                )
                row["eta_part"] = relative_error(est.a_hat, params.a)
        if "bounds" in config.metrics:
            _add_bounds(row, config, model, params, part, spec, horizon, s)
    except Exception as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    if config.timing:
        row["wall_time"] = time.perf_counter() - started
    return row


def _add_bounds(row, config, model, params, part, spec, horizon, s):
    n, k = model.n, model.k
    delta_min = float(expected_degrees(model).min())
    deviation = bounds.bound_M(n, config.eps, delta_min, coeffs=spec.coeffs)
    row["bound_M"] = deviation
    mu = normalized_affinity_spectrum(model)
    zeta = spec.eigenvalue_map(mu)
    zeta = zeta[np.argsort(-np.abs(zeta), kind="stable")]
    b_term = bounds.bound_B(horizon, s, n, k, zeta, deviation, C=config.C)
    row["bound_B"] = b_term
    bracket = 2.0 * horizon * deviation + b_term
    xi_k = float(np.abs(zeta).min()) ** (2 * horizon)
    sizes = np.asarray(model.group_sizes, dtype=np.float64)
    tau = min(
        float(part.diagnostics["min_row_norm"]),
        float(1.0 / np.sqrt(sizes.max())),
    )
    if xi_k > 0.0 and tau > 0.0:
        row["q_bound"] = bounds.bound_misclassification(k, n, tau, xi_k, bracket)
    if params is not None and k == 2:
        row["eta_bound"] = bounds.bound_eta(
            horizon, deviation, b_term, float(mu[1])
        )


def _replicate_task(args) -> tuple[int, int, dict]:
    config, point, grid_index, replicate = args
    return grid_index, replicate, run_replicate(config, point, grid_index, replicate)


def run_experiment(config: ExperimentConfig) -> list[dict]:
    """Run the sweep; returns ordered rows and writes the CSV when configured."""
    points = sweep_grid(config)
    tasks = [
        (config, point, gi, rep)
        for gi, point in enumerate(points)
        for rep in range(config.replicates)
    ]
    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(config.workers) as pool:
            keyed = list(pool.map(_replicate_task, tasks))
    else:
        keyed = [_replicate_task(task) for task in tasks]
    keyed.sort(key=lambda item: (item[0], item[1]))
    rows = [row for _, _, row in keyed]
    if config.output:
        write_rows(config.output, rows)
    return rows


def format_value(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def rows_to_csv(rows: Sequence[dict]) -> str:
    buffer = io.StringIO()
    buffer.write(CSV_SIGNATURE + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format_value(row.get(column, "")) for column in COLUMNS])
    return buffer.getvalue()


def write_rows(path: str, rows: Sequence[dict]) -> None:
    """Write the results CSV atomically (temp file + rename)."""
    text = rows_to_csv(rows)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _mean_sem(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    if values.shape[0] < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / np.sqrt(values.shape[0]))


def summarize(rows: Sequence[dict], metric: str = "Z") -> list[str]:
    """Per-grid-point mean +/- SEM lines for the run summary."""
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        if row.get("error"):
            continue
        value = row.get(metric, "")
        if value == "" or value is None:
            continue
        key = tuple((axis, row[axis]) for axis in AXES if row.get(axis, "") != "")
        groups.setdefault(key, []).append(float(value))
    lines = []
    for key, values in groups.items():
        mean, sem = _mean_sem(np.asarray(values))
        label = " ".join(f"{axis}={value}" for axis, value in key)
        lines.append(f"{label}: {metric} = {mean:.4f} +/- {sem:.4f} ({len(values)} reps)")
    return lines


# ---------------------------------------------------------------------------
# File loaders


def _parse_edges(lines, indexing: int, name: str) -> Graph:
    if indexing not in (0, 1):
        raise ValueError("indexing must be 0 or 1")
    edges = set()
    max_node = -1
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) < 2:
            raise ValueError(f"{name}:{lineno}: expected 'u v', got {text!r}")
        try:
            u, v = int(parts[0]) - indexing, int(parts[1]) - indexing
        except ValueError:
            raise ValueError(
                f"{name}:{lineno}: non-integer node id in {text!r}"
            ) from None
        if u < 0 or v < 0:
            raise ValueError(f"{name}:{lineno}: node id below {indexing}")
        if u == v:
            continue
        edges.add((min(u, v), max(u, v)))
        max_node = max(max_node, u, v)
    if not edges:
        raise ValueError(f"{name}: no edges found")
    n = max_node + 1
    ordered = sorted(edges)
    rows = np.array([e[0] for e in ordered] + [e[1] for e in ordered])
    cols = np.array([e[1] for e in ordered] + [e[0] for e in ordered])
    adj = sp.coo_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(n, n))
    return Graph.from_adjacency(adj)


def load_edge_list(path: str, indexing: int = 0) -> Graph:
    """Read an undirected edge list (one 'u v' pair per line).

    Lines starting with '#' and blank lines are skipped; duplicate edges are
    collapsed and self-loops dropped (simple graph). ``indexing`` gives the
    id of the first node in the file (0 or 1).
    """
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_edges(fh, indexing, path)


def _parse_labels(lines, indexing: int, name: str) -> dict[int, int]:
    if indexing not in (0, 1):
        raise ValueError("indexing must be 0 or 1")
    raw: dict[int, str] = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) < 2:
            raise ValueError(f"{name}:{lineno}: expected 'node label'")
        try:
            node = int(parts[0]) - indexing
        except ValueError:
            raise ValueError(f"{name}:{lineno}: non-integer node id") from None
        raw[node] = parts[1]
    if not raw:
        raise ValueError(f"{name}: no labels found")
    codes = {token: i for i, token in enumerate(sorted(set(raw.values())))}
    return {node: codes[token] for node, token in raw.items()}


def load_labels(path: str, indexing: int = 0) -> dict[int, int]:
    """Read 'node label' lines; labels may be arbitrary tokens."""
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_labels(fh, indexing, path)


def restrict_graph(
    graph: Graph, labels: dict[int, int], largest_component: bool = False
) -> tuple[Graph, np.ndarray, np.ndarray]:
    """Drop unlabeled nodes (and optionally everything off the largest
    connected component); returns the induced graph, its labels, and the
    kept original node ids."""
    keep = np.array(sorted(node for node in labels if 0 <= node < graph.n))
    if keep.shape[0] == 0:
        raise ValueError("no labeled nodes present in the graph")
    sub = graph.adjacency[keep][:, keep]
    if largest_component:
        n_comp, assign = csgraph.connected_components(sub, directed=False)
        if n_comp > 1:
            largest = np.bincount(assign).argmax()
            inner = np.flatnonzero(assign == largest)
            keep = keep[inner]
            sub = sub[inner][:, inner]
    label_array = np.array([labels[node] for node in keep])
    return Graph.from_adjacency(sub), label_array, keep


def karate_club() -> tuple[Graph, np.ndarray]:
    """The bundled 34-node social network with its two-faction split."""
    from importlib.resources import files

    data = files("blindnet.data")
    edge_text = (data / "karate.edges").read_text(encoding="utf-8")
    label_text = (data / "karate.labels").read_text(encoding="utf-8")
    graph = _parse_edges(edge_text.splitlines(), 0, "karate.edges")
    labels = _parse_labels(label_text.splitlines(), 0, "karate.labels")
    if graph.n != 34 or int(graph.adjacency.nnz) != 2 * 78:
        raise RuntimeError("bundled social network is corrupted")
    _, label_array, _ = restrict_graph(graph, labels)
    return graph, label_array


def run_realworld(
    graph: Graph,
    labels: np.ndarray,
    horizons: Sequence[int],
    sample_counts: Sequence[int],
    replicates: int,
    seed: int,
    coeffs: Sequence[float] = (1.0,),
    init: InitDistribution = InitDistribution.GAUSSIAN,
    timing: bool = False,
) -> list[dict]:
    """Dynamics-based recovery on a real graph, with a spectral baseline.

    Each row carries Z (pipeline vs. provided labels) and z_spectral
    (clustering the observed normalized adjacency directly, same k and
    seed). No generative parameters exist here, so the model columns stay
    empty.
    """
    labels = np.asarray(labels).ravel()
    if labels.shape[0] != graph.n:
        raise ValueError("labels length must match graph size")
    k = int(np.unique(labels).shape[0])
    if k < 2:
        raise ValueError("need at least two groups in the labels")
    if graph.n > DENSE_NODE_LIMIT:
        raise ValueError(f"graph larger than desk-scale limit {DENSE_NODE_LIMIT}")
    operator = normalized_adjacency(graph)
    dense_operator = operator.toarray()
    spec = FilterSpec(tuple(coeffs))
    rows = []
    grid = [(t, s) for t in horizons for s in sample_counts]
    for grid_index, (horizon, s) in enumerate(grid):
        for replicate in range(replicates):
            row = _blank_row()
            row["n"] = graph.n
            row["k"] = k
            row["T"] = int(horizon)
            row["s"] = int(s)
            row["replicate"] = replicate
            rep_seed = _seeds.derive_seed(seed, _seeds.REPLICATE, grid_index, replicate)
            row["seed"] = rep_seed
            started = time.perf_counter()
            try:
                snapshots = simulate_snapshots(
                    operator, spec, int(horizon), int(s), init, rep_seed,
                    check_norm=False,
                )
                part = recover_partition(snapshots, k, rep_seed)
                row["Z"] = overlap_score(part.labels, labels)
                baseline = recover_from_covariance(dense_operator, k, rep_seed)
                row["z_spectral"] = overlap_score(baseline.labels, labels)
            except Exception as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
            if timing:
                row["wall_time"] = time.perf_counter() - started
            rows.append(row)
    return rows
