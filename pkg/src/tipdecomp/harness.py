"""Experiment runners: threshold sweeps, baseline comparisons, degree-removal
robustness, activation speed and runtime scaling.

Every runner returns :class:`TrialRecord` rows; :func:`write_records` emits
them as CSV (fixed column order) or JSON.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import generators
from .baselines import MEASURES, compute_centrality, greedy_centrality_seed, reichman_bound
from .decomp import tip_decomp
from .errors import TipDecompError
from .exact import build_seed_ip, export_lp, min_seed_bruteforce
from .graph import DirectedGraph, read_edge_list, remove_nodes
from .structure import PlanarFit, average_clustering, louvain, planar_fit
from .tipping import (
    AbsoluteCapped,
    FractionOfInDegree,
    ThresholdSpec,
    activate_fixpoint,
    as_fraction,
    compute_thresholds,
    covers,
    critical_mass_step,
)

log = logging.getLogger(__name__)

__all__ = [
    "INT_SWEEP",
    "FRAC_SWEEP",
    "REMOVAL_FRACTIONS",
    "COLUMNS",
    "TrialConfig",
    "TrialRecord",
    "ScalingFit",
    "threshold_settings",
    "run_threshold_sweep",
    "run_degree_removal",
    "run_activation_speed",
    "run_runtime_scaling",
    "compare_baselines",
    "structure_summary",
    "fit_structure",
    "write_records",
]

INT_SWEEP: tuple[int, ...] = tuple(range(1, 11))
FRAC_SWEEP: tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 13))
REMOVAL_FRACTIONS: tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(0, 11))

COLUMNS = (
    "network",
    "n",
    "m",
    "mode",
    "value",
    "algorithm",
    "seed_size",
    "seed_fraction",
    "runtime_ms",
    "steps",
    "critical_step",
    "critical_pct",
    "removal_fraction",
)

ALGORITHMS = ("decomp", "bruteforce", "ip-export", *MEASURES)


@dataclass
class TrialConfig:
    """What to run and where to write it.

    ``threshold_mode`` is one of ``int``, ``frac`` (single value taken from
    ``threshold_value``), ``int-sweep`` or ``frac-sweep``.
    """

    graph: DirectedGraph | None = None
    graph_path: str | os.PathLike | None = None
    symmetrize: bool = False
    network: str | None = None
    threshold_mode: str = "int-sweep"
    threshold_value: float | None = None
    int_values: Sequence[int] = INT_SWEEP
    frac_values: Sequence[float] = FRAC_SWEEP
    algorithms: Sequence[str] = ("decomp",)
    measures: Sequence[str] = tuple(MEASURES)
    removal_fractions: Sequence[float] = REMOVAL_FRACTIONS
    rng_seed: int = 0
    bruteforce_limit: int = 20
    lp_dir: str | os.PathLike | None = None
    trace_dir: str | os.PathLike | None = None
    scaling_sizes: Sequence[int] = ()
    scaling_degree: float = 10.0
    scaling_repeats: int = 3

    def __post_init__(self):
        if self.threshold_mode not in ("int", "frac", "int-sweep", "frac-sweep"):
            raise ValueError(f"unknown threshold mode {self.threshold_mode!r}")
        if self.threshold_mode in ("int", "frac") and self.threshold_value is None:
            raise ValueError(f"threshold mode {self.threshold_mode!r} needs a value")
        for p in self.removal_fractions:
            if not 0.0 <= p <= 0.5:
                raise ValueError(f"removal fraction {p} outside [0, 0.5]")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        for mname in self.measures:
            if mname not in MEASURES:
                raise ValueError(f"unknown centrality measure {mname!r}")

    def load_graph(self) -> DirectedGraph:
        if self.graph is None:
            if self.graph_path is None:
                raise ValueError("no graph given")
            self.graph = read_edge_list(self.graph_path, symmetrize=self.symmetrize)
        return self.graph

    @property
    def network_name(self) -> str:
        if self.network:
            return self.network
        if self.graph_path is not None:
            return Path(self.graph_path).stem
        return "graph"


@dataclass
class TrialRecord:
    network: str
    n: int
    m: int
    mode: str
    value: float | int | None
    algorithm: str
    seed_size: float | int | None = None
    seed_fraction: float | None = None
    runtime_ms: float | None = None
    steps: int | None = None
    critical_step: int | None = None
    critical_pct: float | None = None
    removal_fraction: float | None = None
    error: str | None = None

    def row(self) -> list[str]:
        out = []
        for col in COLUMNS:
            v = getattr(self, col)
            if v is None:
                out.append("")
            elif col == "runtime_ms":
                out.append(f"{v:.3f}")
            elif isinstance(v, float):
                out.append(f"{v:.10g}")
            else:
                out.append(str(v))
        return out


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line ``runtime_ms ~ slope * (m ln n) + intercept``."""

    slope: float
    intercept: float
    r_squared: float
    points: int = 0


def threshold_settings(cfg: TrialConfig) -> list[tuple[str, float | int, ThresholdSpec]]:
    mode = cfg.threshold_mode
    if mode == "int":
        k = int(cfg.threshold_value)
        return [("int", k, AbsoluteCapped(k))]
    if mode == "frac":
        f = float(cfg.threshold_value)
        return [("frac", f, FractionOfInDegree(f))]
    if mode == "int-sweep":
        return [("int", k, AbsoluteCapped(k)) for k in cfg.int_values]
    return [("frac", f, FractionOfInDegree(f)) for f in cfg.frac_values]


def _seed_fraction(size: float, n: int) -> float:
    return size / n if n else 0.0


def _decomp_record(
    g: DirectedGraph, network: str, mode: str, value, spec: ThresholdSpec, removal: float | None = None
) -> tuple[TrialRecord, frozenset[int]]:
    ka = compute_thresholds(g, spec)
    t0 = time.perf_counter()
    result = tip_decomp(g, ka)
    elapsed = (time.perf_counter() - t0) * 1000.0
    final, trace = activate_fixpoint(g, ka, result.seed)
    if len(final) != g.n:
        raise AssertionError(f"decomposition seed does not cover {network} ({mode}={value})")
    step, pct = critical_mass_step(trace)
    rec = TrialRecord(
        network, g.n, g.m, mode, value, "decomp",
        seed_size=len(result.seed),
        seed_fraction=_seed_fraction(len(result.seed), g.n),
        runtime_ms=elapsed,
        steps=len(trace),
        critical_step=step,
        critical_pct=pct,
        removal_fraction=removal,
    )
    return rec, result.seed


def _ordered(records: Iterable[TrialRecord]) -> list[TrialRecord]:
    return sorted(records, key=lambda r: (r.mode, r.value if r.value is not None else -1, r.algorithm))


def run_threshold_sweep(cfg: TrialConfig) -> list[TrialRecord]:
    """Seed sizes for every threshold setting and configured algorithm.

    A failing trial is recorded with its ``error`` set and the sweep moves on.
    """
    g = cfg.load_graph()
    if g.n == 0:
        return []
    name = cfg.network_name
    scores_cache: dict = {}
    records: list[TrialRecord] = []
    for mode, value, spec in threshold_settings(cfg):
        for algo in cfg.algorithms:
            base = TrialRecord(name, g.n, g.m, mode, value, algo)
            try:
                records.append(_run_algorithm(cfg, g, name, mode, value, spec, algo, scores_cache))
            except (TipDecompError, ValueError, OSError) as exc:
                log.warning("trial %s %s=%s %s failed: %s", name, mode, value, algo, exc)
                base.error = str(exc)
                records.append(base)
    return _ordered(records)


def _run_algorithm(cfg, g, name, mode, value, spec, algo, scores_cache) -> TrialRecord:
    if algo == "decomp":
        rec, _ = _decomp_record(g, name, mode, value, spec)
        return rec
    ka = compute_thresholds(g, spec)
    rec = TrialRecord(name, g.n, g.m, mode, value, algo)
    t0 = time.perf_counter()
    if algo == "bruteforce":
        seed = min_seed_bruteforce(g, ka, node_limit=cfg.bruteforce_limit)
    elif algo == "ip-export":
        model = build_seed_ip(g, spec)
        if cfg.lp_dir is not None:
            Path(cfg.lp_dir).mkdir(parents=True, exist_ok=True)
            target = Path(cfg.lp_dir) / f"{name}_{mode}_{value}.lp"
            with open(target, "w", encoding="utf-8") as fh:
                export_lp(model, fh)
        rec.runtime_ms = (time.perf_counter() - t0) * 1000.0
        return rec
    else:
        if algo not in scores_cache:
            scores_cache[algo] = compute_centrality(g, algo)
        seed = greedy_centrality_seed(g, ka, scores_cache[algo])
    rec.runtime_ms = (time.perf_counter() - t0) * 1000.0
    rec.seed_size = len(seed)
    rec.seed_fraction = _seed_fraction(len(seed), g.n)
    return rec


def removal_ranking(g: DirectedGraph) -> list[int]:
    """Nodes by total degree descending, smaller id first on ties."""
    total = [len(g.out_adj[i]) + len(g.in_adj[i]) for i in range(g.n)]
    return sorted(range(g.n), key=lambda i: (-total[i], i))


def run_degree_removal(cfg: TrialConfig) -> list[TrialRecord]:
    """Remove the top ``floor(p * n)`` nodes by degree, then decompose what is left."""
    g = cfg.load_graph()
    name = cfg.network_name
    ranking = removal_ranking(g)
    records: list[TrialRecord] = []
    for mode, value, spec in threshold_settings(cfg):
        for p in cfg.removal_fractions:
            count = math.floor(as_fraction(p) * g.n)
            sub, _ = remove_nodes(g, ranking[:count])
            if sub.n == 0:
                records.append(
                    TrialRecord(name, 0, 0, mode, value, "decomp", seed_size=0, seed_fraction=0.0,
                                removal_fraction=p, error="surviving graph is empty")
                )
                continue
            rec, _ = _decomp_record(sub, name, mode, value, spec, removal=p)
            records.append(rec)
    return records


def run_activation_speed(cfg: TrialConfig) -> list[TrialRecord]:
    """Cascade from the decomposition seed; optionally writes one trace CSV per setting."""
    g = cfg.load_graph()
    name = cfg.network_name
    records: list[TrialRecord] = []
    for mode, value, spec in threshold_settings(cfg):
        ka = compute_thresholds(g, spec)
        result = tip_decomp(g, ka)
        final, trace = activate_fixpoint(g, ka, result.seed)
        step, pct = critical_mass_step(trace)
        records.append(
            TrialRecord(name, g.n, g.m, mode, value, "decomp",
                        seed_size=len(result.seed),
                        seed_fraction=_seed_fraction(len(result.seed), g.n),
                        steps=len(trace), critical_step=step, critical_pct=pct)
        )
        if cfg.trace_dir is not None:
            Path(cfg.trace_dir).mkdir(parents=True, exist_ok=True)
            with open(Path(cfg.trace_dir) / f"{name}_{mode}_{value}_trace.csv", "w", encoding="utf-8") as fh:
                trace.to_csv(fh)
    return records


def linear_fit(x: Sequence[float], y: Sequence[float]) -> ScalingFit:
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if len(xa) < 3:
        raise ValueError(f"a scaling fit needs at least 3 sizes, got {len(xa)}")
    slope, intercept = np.polyfit(xa, ya, 1)
    resid = ya - (slope * xa + intercept)
    ss_tot = float(((ya - ya.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(resid @ resid) / ss_tot
    return ScalingFit(float(slope), float(intercept), r2, len(xa))


def run_runtime_scaling(cfg: TrialConfig) -> tuple[list[TrialRecord], ScalingFit | None]:
    """Time the decomposition over uniform-random graphs of increasing size.

    Each ladder size ``n`` gets edge probability ``scaling_degree / (n - 1)``.
    The best of ``scaling_repeats`` wall-clock timings is kept, and runtime is
    regressed on ``m ln n``. Fewer than three sizes yields no fit.
    """
    settings = threshold_settings(cfg)
    mode, value, spec = settings[0]
    records: list[TrialRecord] = []
    for idx, n in enumerate(cfg.scaling_sizes):
        p = min(1.0, cfg.scaling_degree / max(n - 1, 1))
        g = generators.uniform_random(n, p, seed=cfg.rng_seed + idx)
        ka = compute_thresholds(g, spec)
        best = math.inf
        seed_size = 0
        for _ in range(max(1, cfg.scaling_repeats)):
            t0 = time.perf_counter()
            result = tip_decomp(g, ka)
            best = min(best, (time.perf_counter() - t0) * 1000.0)
            seed_size = len(result.seed)
        records.append(
            TrialRecord(f"uniform-random-{n}", g.n, g.m, mode, value, "decomp",
                        seed_size=seed_size, seed_fraction=_seed_fraction(seed_size, g.n),
                        runtime_ms=best)
        )
    if len(records) < 3:
        if records:
            log.warning("scaling fit refused: %d size(s), need at least 3", len(records))
        return records, None
    x = [r.m * math.log(r.n) for r in records]
    y = [r.runtime_ms for r in records]
    return records, linear_fit(x, y)


def compare_baselines(cfg: TrialConfig) -> list[TrialRecord]:
    """Decomposition vs greedy centrality seeding (and the Reichman bound).

    The bound is reported for integer thresholds on symmetric graphs; where it
    does not apply the row carries an error instead of a value.
    """
    g = cfg.load_graph()
    name = cfg.network_name
    records: list[TrialRecord] = []
    scores_cache: dict = {}
    algos = ["decomp", *cfg.measures]
    if "bruteforce" in cfg.algorithms:
        algos.append("bruteforce")
    for mode, value, spec in threshold_settings(cfg):
        for algo in algos:
            try:
                records.append(_run_algorithm(cfg, g, name, mode, value, spec, algo, scores_cache))
            except (TipDecompError, ValueError) as exc:
                records.append(TrialRecord(name, g.n, g.m, mode, value, algo, error=str(exc)))
        bound = TrialRecord(name, g.n, g.m, mode, value, "reichman_bound")
        try:
            if mode != "int":
                raise TipDecompError("the bound needs a homogeneous integer threshold")
            b = reichman_bound(g, int(value))
            bound.seed_size = b
            bound.seed_fraction = _seed_fraction(b, g.n)
        except TipDecompError as exc:
            bound.error = str(exc)
        records.append(bound)
    return _ordered(records)


def structure_summary(cfg: TrialConfig) -> dict:
    """Average clustering, Louvain modularity and mean decomposition seed
    percentage over the configured threshold settings."""
    g = cfg.load_graph()
    part, q = louvain(g, seed=cfg.rng_seed)
    sizes = []
    for _mode, _value, spec in threshold_settings(cfg):
        ka = compute_thresholds(g, spec)
        seed = tip_decomp(g, ka).seed
        assert covers(g, ka, seed)
        sizes.append(100.0 * _seed_fraction(len(seed), g.n))
    return {
        "network": cfg.network_name,
        "n": g.n,
        "m": g.m,
        "clustering": average_clustering(g),
        "modularity": q,
        "communities": len(set(part.membership)),
        "mean_seed_pct": float(np.mean(sizes)) if sizes else 0.0,
    }


def fit_structure(summaries: Sequence[dict]) -> PlanarFit:
    return planar_fit([(s["modularity"], s["clustering"], s["mean_seed_pct"]) for s in summaries])


def write_records(records: Sequence[TrialRecord], sink: TextIO, fmt: str = "csv") -> None:
    if fmt == "json":
        json.dump([asdict(r) for r in records], sink, indent=2)
        sink.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow(r.row())
