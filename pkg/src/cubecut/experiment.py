"""Seeded recovery and concentration experiments with deterministic CSV/JSON output.

Trial ``t`` of every experiment uses the seed ``derive_seed(master_seed, t)``.
The same trial seed is used at every ``p`` of a grid, so because an edge is
kept iff its uniform is below ``p``, the sampled graphs across the grid are
nested.  Any row can be recomputed from ``(params, p, seed, solver)`` alone.

Trials run in a thread pool capped by ``CUBECUT_THREADS``; rows are collected
per trial and written in trial order, so output never depends on the pool
size.  The ``wall_ms`` column is the only non-reproducible field and is left
blank unless timing is requested.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from ._errors import CubeCutError
from ._rng import derive_seed
from ._validation import check_probability, check_seed
from .bitcube import CubeParams, coordinate_cut
from .recover import SolverConfig, solve
from .sample import SampleParams, isolated_vertex_count, sampled_cut_size, subsample

RECOVERY_COLUMNS = (
    "d", "k", "component", "p", "trial", "seed", "objective", "max_dist",
    "mean_dist", "matching_ok", "exact_recovery", "isolated", "wall_ms",
)
CONCENTRATION_COLUMNS = ("d", "k", "p", "trial", "coord_j", "coord_b", "sampled_cut", "theory_mean")

THREADS_ENV = "CUBECUT_THREADS"


def fmt_real(x) -> str:
    """12 significant digits; integers and exact rationals stay exact."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.12g}"


def n_workers() -> int:
    """Pool size from ``CUBECUT_THREADS`` (default: CPU count)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise CubeCutError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    return max(1, n)


def ordered_map(fn, items):
    """``[fn(x) for x in items]`` on the capped pool, results in input order."""
    items = list(items)
    workers = min(n_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run: cube, rate grid, trial count, master seed and solver."""

    params: CubeParams
    p_grid: tuple[float, ...]
    trials: int = 1
    master_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    output_format: str = "csv"
    output_path: str | None = None
    timing: bool = False

    def __post_init__(self):
        grid = tuple(check_probability(p) for p in np.atleast_1d(self.p_grid))
        if not grid:
            raise CubeCutError("p_grid must not be empty")
        object.__setattr__(self, "p_grid", grid)
        if int(self.trials) < 1:
            raise CubeCutError(f"trials must be >= 1, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "master_seed", check_seed(self.master_seed))
        if self.output_format not in ("csv", "json"):
            raise CubeCutError(f"format must be 'csv' or 'json', got {self.output_format!r}")

    def trial_seed(self, trial: int) -> int:
        return derive_seed(self.master_seed, trial)


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    p: float
    objective: int
    distances: tuple[int, ...]
    matching_ok: bool
    exact_recovery: bool
    isolated_vertices: int
    wall_time: float | None = None

    @property
    def max_distance(self) -> int:
        return max(self.distances)

    @property
    def mean_distance(self) -> float:
        return sum(self.distances) / len(self.distances)


def run_trial(params: CubeParams, p: float, seed: int, solver: SolverConfig, trial_index: int = 0,
              timing: bool = False) -> TrialRecord:
    """Subsample, solve and match one trial."""
    start = time.perf_counter()
    G = subsample(params, SampleParams(p, seed))
    res = solve(G, solver)
    wall = time.perf_counter() - start if timing else None
    return TrialRecord(
        trial_index, seed, p, int(res.objective), tuple(m.distance for m in res.per_cut),
        res.matching_ok, res.exact_recovery, isolated_vertex_count(G), wall,
    )


def _summary(p, records: list[TrialRecord]) -> dict:
    n = len(records)
    rate = sum(r.exact_recovery for r in records) / n
    return {
        "p": p,
        "trials": n,
        "exact_recovery_rate": rate,
        "standard_error": math.sqrt(rate * (1 - rate) / n),
        "matching_ok_rate": sum(r.matching_ok for r in records) / n,
        "mean_distance": float(np.mean([r.mean_distance for r in records])),
        "max_distance": max(r.max_distance for r in records),
        "mean_objective": float(np.mean([r.objective for r in records])),
        "mean_isolated": float(np.mean([r.isolated_vertices for r in records])),
    }


@dataclass
class RecoveryRun:
    spec: ExperimentSpec
    records: list[TrialRecord]
    summaries: list[dict]

    def rows(self):
        prm = self.spec.params
        comp = prm.component.value
        for r in self.records:
            yield (
                prm.d, prm.k, comp, r.p, r.trial_index, r.seed, r.objective, r.max_distance,
                r.mean_distance, r.matching_ok, r.exact_recovery, r.isolated_vertices,
                "" if r.wall_time is None else r.wall_time * 1000.0,
            )

    def to_csv(self) -> str:
        return _csv(RECOVERY_COLUMNS, self.rows())

    def summary(self) -> dict:
        return {
            "kind": "recovery_summary",
            "params": self.spec.params.describe(),
            "solver": self.spec.solver.describe(),
            "master_seed": self.spec.master_seed,
            "trials": self.spec.trials,
            "p_grid": list(self.spec.p_grid),
            "per_p": self.summaries,
        }

    def to_json(self) -> str:
        return dump_json(self.summary())


def run_recovery(spec: ExperimentSpec) -> RecoveryRun:
    """All (p, trial) recovery trials of ``spec`` plus a per-p summary."""
    jobs = [(p, t) for p in spec.p_grid for t in range(spec.trials)]
    records = ordered_map(
        lambda job: run_trial(spec.params, job[0], spec.trial_seed(job[1]), spec.solver, job[1], spec.timing),
        jobs,
    )
    summaries = [
        _summary(p, [r for r in records if r.p == p]) for p in spec.p_grid
    ]
    return RecoveryRun(spec, records, summaries)


def coordinate_cut_theory(params: CubeParams, p: float) -> float:
    """Expected sampled size ``p C(d-1, k-1) |V| / 2`` of any coordinate cut."""
    return p * comb(params.d - 1, params.k - 1) * params.n_vertices / 2


@dataclass
class ConcentrationRun:
    spec: ExperimentSpec
    rows_: list[tuple]
    isolated: dict

    def rows(self):
        return iter(self.rows_)

    def to_csv(self) -> str:
        return _csv(CONCENTRATION_COLUMNS, self.rows())

    def summary(self) -> dict:
        prm = self.spec.params
        per_p = []
        for p in self.spec.p_grid:
            vals = np.array([r[6] for r in self.rows_ if r[2] == p], dtype=np.float64)
            iso = np.array(self.isolated[p], dtype=np.float64)
            per_p.append({
                "p": p,
                "trials": self.spec.trials,
                "cut_mean": float(vals.mean()),
                "cut_std": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
                "cut_theory_mean": coordinate_cut_theory(prm, p),
                "isolated_mean": float(iso.mean()),
                "isolated_theory_mean": (1 - p) ** prm.degree * prm.n_vertices,
            })
        return {
            "kind": "concentration_summary",
            "params": prm.describe(),
            "master_seed": self.spec.master_seed,
            "trials": self.spec.trials,
            "p_grid": list(self.spec.p_grid),
            "per_p": per_p,
        }

    def to_json(self) -> str:
        return dump_json(self.summary())


def run_concentration(spec: ExperimentSpec) -> ConcentrationRun:
    """Sampled size of every coordinate cut ``S_{j,b}`` per (p, trial)."""
    prm = spec.params
    cuts = [(j, b, coordinate_cut(prm, j, b)) for j in range(1, prm.d + 1) for b in (0, 1)]

    def one(job):
        p, t = job
        G = subsample(prm, SampleParams(p, spec.trial_seed(t)))
        theory = coordinate_cut_theory(prm, p)
        rows = [(prm.d, prm.k, p, t, j, b, sampled_cut_size(G, S), theory) for j, b, S in cuts]
        return rows, isolated_vertex_count(G)

    jobs = [(p, t) for p in spec.p_grid for t in range(spec.trials)]
    out = ordered_map(one, jobs)
    rows, isolated = [], {p: [] for p in spec.p_grid}
    for (p, _), (r, iso) in zip(jobs, out):
        rows.extend(r)
        isolated[p].append(iso)
    return ConcentrationRun(spec, rows, isolated)


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt_real(v) for v in row])
    return buf.getvalue()


def _round(obj):
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if not math.isfinite(x) else float(f"{x:.12g}")
    return obj


def dump_json(document: dict) -> str:
    """Sorted keys, reals at 12 significant digits, trailing newline."""
    return json.dumps(_round(document), indent=2, sort_keys=True) + "\n"
