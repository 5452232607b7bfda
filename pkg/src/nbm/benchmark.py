"""Replicated simulate-and-fit sweeps summarised in the layout of a results table."""

from __future__ import annotations

import csv
import io
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimator import fit
from .generator import GeneratorConfig, generate_network
from .metrics import clustering_error, estimation_error

FORMAT_VERSION = 1
FIT_MODELS = ("DCBM", "NBM", "PABM")


@dataclass(frozen=True)
class BenchmarkGrid:
    n: tuple
    K: tuple
    L: tuple
    omega: tuple
    fit_models: tuple = FIT_MODELS
    replicates: int = 10
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkGrid":
        def as_tuple(v):
            return tuple(v) if isinstance(v, (list, tuple)) else (v,)

        unknown = set(data) - {"n", "K", "L", "omega", "fit_models", "replicates", "seed"}
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        models = tuple(m.upper() for m in as_tuple(data.get("fit_models", FIT_MODELS)))
        bad = set(models) - set(FIT_MODELS)
        if bad:
            raise ValueError(f"unknown fit models: {sorted(bad)}")
        return cls(
            n=as_tuple(data["n"]),
            K=as_tuple(data["K"]),
            L=as_tuple(data["L"]),
            omega=as_tuple(data["omega"]),
            fit_models=models,
            replicates=int(data.get("replicates", 10)),
            seed=int(data.get("seed", 0)),
        )

    def cells(self):
        return list(itertools.product(self.n, self.K, self.L, self.omega))


def replicate_seed(seed: int, cell: int, replicate: int) -> int:
    return int(np.random.SeedSequence([seed, cell, replicate]).generate_state(1)[0])


def fitted_L(model: str, K: int, L: int) -> int:
    return {"DCBM": 1, "NBM": L, "PABM": K}[model]


@dataclass
class ReplicateResult:
    cell: int
    replicate: int
    metrics: dict = field(default_factory=dict)


def run_replicate(args) -> ReplicateResult:
    grid, cell_index, replicate = args
    n, K, L, omega = grid.cells()[cell_index]
    seed = replicate_seed(grid.seed, cell_index, replicate)
    net = generate_network(GeneratorConfig(n, K, L, omega, seed=seed))
    true_meta = net.c.labels[net.z.labels]
    out = ReplicateResult(cell_index, replicate)
    representation = None
    for model in grid.fit_models:
        L_fit = fitted_L(model, K, L)
        result = fit(net.graph, K, L_fit, seed=seed, representation=representation)
        if result.representation is not None:
            representation = result.representation
        out.metrics[f"{model}_clust_err"] = clustering_error(net.z.labels, result.z.labels)
        if model == "NBM":
            out.metrics["NBM_meta_err"] = clustering_error(true_meta, result.meta.labels)
        out.metrics[f"{model}_est_err"] = estimation_error(result.P_hat, net.P, model, K=K, L=L_fit)
    return out


def thread_count(requested: int | None = None) -> int:
    if requested is None:
        env = os.environ.get("NBM_THREADS")
        requested = int(env) if env else 1
    return max(1, int(requested))


def run_benchmark(grid: BenchmarkGrid, threads: int | None = None) -> list[ReplicateResult]:
    """All replicates of all cells; results are in (cell, replicate) order."""
    jobs = [(grid, c, r) for c in range(len(grid.cells())) for r in range(grid.replicates)]
    workers = thread_count(threads)
    if workers == 1:
        return [run_replicate(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_replicate, jobs))


def metric_columns(grid: BenchmarkGrid) -> list[str]:
    cols = [f"{m}_clust_err" for m in grid.fit_models]
    if "NBM" in grid.fit_models:
        cols.append("NBM_meta_err")
    cols += [f"{m}_est_err" for m in grid.fit_models]
    return cols


def summarize(grid: BenchmarkGrid, results: list[ReplicateResult]) -> list[dict]:
    rows = []
    columns = metric_columns(grid)
    for index, (n, K, L, omega) in enumerate(grid.cells()):
        reps = [r.metrics for r in results if r.cell == index]
        row = {"n": n, "K": K, "L": L, "omega": omega, "replicates": len(reps)}
        for col in columns:
            values = np.array([m[col] for m in reps])
            sd = values.std(ddof=1) if values.size > 1 else 0.0
            row[col] = f"{values.mean():.5f} ({sd:.5f})"
        rows.append(row)
    return rows


def format_table(grid: BenchmarkGrid, rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# format_version={FORMAT_VERSION}\n")
    fields = ["n", "K", "L", "omega", "replicates"] + metric_columns(grid)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
