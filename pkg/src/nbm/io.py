"""On-disk formats for networks and fit results.

Edge list: plain text, one ``i j`` pair per line (0-based, ``i < j``,
lexicographically sorted). A leading ``# nodes <n>`` comment records the node
count so isolated trailing nodes survive a round trip; other ``#`` lines are
ignored.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import Clustering, NbmError, NbmParameters, SymmetricGraph, build_probability
from .estimator import FitResult
from .metrics import clustering_error, estimation_error, model_for

FORMAT_VERSION = 1


class DataFormatError(NbmError, ValueError):
    pass


def format_edge_list(graph: SymmetricGraph) -> str:
    lines = [f"# nodes {graph.n}"]
    lines.extend(f"{i} {j}" for i, j in graph.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(path, graph: SymmetricGraph) -> None:
    Path(path).write_text(format_edge_list(graph))


def parse_edge_list(text: str, n: int | None = None) -> SymmetricGraph:
    edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes":
                try:
                    declared = int(parts[1])
                except ValueError:
                    raise DataFormatError(f"line {lineno}: bad node count {parts[1]!r}") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataFormatError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataFormatError(f"line {lineno}: non-integer node id in {raw!r}") from None
        if i < 0 or j < 0:
            raise DataFormatError(f"line {lineno}: negative node id")
        if i == j:
            raise DataFormatError(f"line {lineno}: self-loop on node {i}")
        edges.append((min(i, j), max(i, j)))
    top = max((j for _, j in edges), default=-1) + 1
    n = n if n is not None else declared if declared is not None else top
    if n < top:
        raise DataFormatError(f"edge list references node {top - 1} but n={n}")
    return SymmetricGraph.from_edges(n, edges)


def read_edge_list(path, n: int | None = None) -> SymmetricGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    return parse_edge_list(text, n)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sidecar_dict(params: NbmParameters, config: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "config": config or {},
        "seed": (config or {}).get("seed"),
        "n": params.n,
        "K": params.K,
        "L": params.L,
        "z": params.z.labels.tolist(),
        "c": params.c.labels.tolist(),
        "B": params.B.tolist(),
        "H": params.H.tolist(),
    }


def write_sidecar(path, params: NbmParameters, config: dict | None = None) -> None:
    Path(path).write_text(_dump(sidecar_dict(params, config)))


def read_sidecar(path) -> NbmParameters:
    try:
        data = json.loads(Path(path).read_text())
        z = Clustering(np.asarray(data["z"]), int(data["K"]))
        c = Clustering(np.asarray(data["c"]), int(data["L"]))
        return NbmParameters(np.asarray(data["B"]), np.asarray(data["H"]), z, c)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"invalid sidecar {path}: {exc}") from exc


def fit_report(result: FitResult, truth: NbmParameters | None = None, selection=None) -> dict:
    """JSON-ready summary of a fit, with errors against ``truth`` when given."""
    report = {
        "format_version": FORMAT_VERSION,
        "n": len(result.z),
        "K": result.K,
        "L": result.L,
        "model": model_for(result.K, result.L).value,
        "z": result.z.labels.tolist(),
        "c": result.c.labels.tolist(),
        "meta": result.meta.labels.tolist(),
        "objective": result.objective,
        "penalty": result.penalty,
        "block_singular_values": [
            {"meta": l, "community": k, "sigma": s}
            for (l, k), s in sorted(result.singular_values.items())
        ],
    }
    if result.representation is not None:
        rep = result.representation.report()
        report["ssc"] = {k: rep[k] for k in ("gamma1", "gamma2", "max_iterations", "max_residual")}
    if selection is not None:
        report["selection"] = selection.report()
    if truth is not None:
        P = build_probability(truth).entries
        true_meta = truth.c.labels[truth.z.labels]
        report["truth"] = {
            "clustering_error": clustering_error(truth.z.labels, result.z.labels),
            "meta_clustering_error": clustering_error(true_meta, result.meta.labels),
            "estimation_error": estimation_error(
                result.P_hat, P, model_for(result.K, result.L), K=result.K, L=result.L
            ),
        }
    return report


def write_json(path, obj) -> None:
    Path(path).write_text(_dump(obj))


def write_matrix_csv(path, M) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(M):
            writer.writerow([repr(float(x)) for x in row])
