"""Deterministic tipping (linear threshold) dynamics.

A node becomes active once at least ``k[i]`` of its in-neighbors are active;
activation is monotone and never reverts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection, Iterable, TextIO, Union

from .graph import DirectedGraph

__all__ = [
    "FractionOfInDegree",
    "AbsoluteCapped",
    "ThresholdSpec",
    "ThresholdAssignment",
    "ActivationTrace",
    "as_fraction",
    "compute_thresholds",
    "activate_step",
    "activate_fixpoint",
    "covers",
    "critical_mass_step",
]


def as_fraction(x: float | int | Fraction | str) -> Fraction:
    """Exact rational for a threshold fraction.

    Floats go through their shortest repr so that 0.3 means 3/10; otherwise
    ``ceil(0.3 * 10)`` would come out as 4.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(x) if isinstance(x, float) else x)


@dataclass(frozen=True)
class FractionOfInDegree:
    """Heterogeneous threshold: a node needs ``ceil(f * d_in)`` active in-neighbors."""

    f: float | Fraction

    def __post_init__(self):
        if not 0 < as_fraction(self.f) <= 1:
            raise ValueError(f"threshold fraction must lie in (0, 1], got {self.f!r}")

    @property
    def fraction(self) -> Fraction:
        return as_fraction(self.f)


@dataclass(frozen=True)
class AbsoluteCapped:
    """Homogeneous integer threshold ``k``, capped at each node's in-degree."""

    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"integer threshold must be >= 1, got {self.k!r}")


ThresholdSpec = Union[FractionOfInDegree, AbsoluteCapped]


@dataclass(frozen=True)
class ThresholdAssignment:
    """Realized per-node activation counts."""

    k: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.k)

    def __getitem__(self, i: int) -> int:
        return self.k[i]

    def __iter__(self):
        return iter(self.k)


@dataclass
class ActivationTrace:
    """Cascade record: ``steps[t]`` holds the nodes first active at step ``t``."""

    steps: list[tuple[int, ...]] = field(default_factory=list)
    cumulative: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_csv(self, sink: TextIO) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["step", "newly_active", "cumulative"])
        for t, (new, total) in enumerate(zip(self.steps, self.cumulative)):
            writer.writerow([t, len(new), total])


def compute_thresholds(g: DirectedGraph, spec: ThresholdSpec) -> ThresholdAssignment:
    if isinstance(spec, FractionOfInDegree):
        frac = spec.fraction
        p, q = frac.numerator, frac.denominator
        # ceil(p * d / q) in integers
        return ThresholdAssignment(tuple(-(-p * len(a) // q) for a in g.in_adj))
    if isinstance(spec, AbsoluteCapped):
        k = spec.k
        return ThresholdAssignment(tuple(min(len(a), k) for a in g.in_adj))
    raise TypeError(f"unsupported threshold spec {spec!r}")


def activate_step(g: DirectedGraph, ka: ThresholdAssignment | Collection[int], active: Iterable[int]) -> frozenset[int]:
    """One synchronous application of the activation function."""
    active = frozenset(active)
    k = ka.k if isinstance(ka, ThresholdAssignment) else ka
    newly = [
        v
        for v in range(g.n)
        if v not in active and sum(1 for u in g.in_adj[v] if u in active) >= k[v]
    ]
    return active.union(newly)


def activate_fixpoint(
    g: DirectedGraph, ka: ThresholdAssignment | Collection[int], seed: Iterable[int]
) -> tuple[frozenset[int], ActivationTrace]:
    """Iterate the activation function to convergence.

    Runs in O(n + m) by tracking, per node, how many of its in-neighbors are
    already active; only out-neighbors of the latest wave are re-examined.
    """
    k = ka.k if isinstance(ka, ThresholdAssignment) else ka
    n = g.n
    out_adj = g.out_adj
    is_active = bytearray(n)
    seed_nodes = sorted(set(seed))
    for v in seed_nodes:
        if not 0 <= v < n:
            raise ValueError(f"seed node {v} not in graph")
        is_active[v] = 1
    hits = [0] * n
    for u in seed_nodes:
        for v in out_adj[u]:
            hits[v] += 1
    trace = ActivationTrace([tuple(seed_nodes)], [len(seed_nodes)])
    wave = [v for v in range(n) if not is_active[v] and hits[v] >= k[v]]
    total = len(seed_nodes)
    while wave:
        for v in wave:
            is_active[v] = 1
        total += len(wave)
        trace.steps.append(tuple(wave))
        trace.cumulative.append(total)
        candidates: set[int] = set()
        for u in wave:
            for v in out_adj[u]:
                if not is_active[v]:
                    hits[v] += 1
                    candidates.add(v)
        wave = sorted(v for v in candidates if hits[v] >= k[v])
    final = frozenset(i for i in range(n) if is_active[i])
    return final, trace


def covers(g: DirectedGraph, ka: ThresholdAssignment | Collection[int], seed: Iterable[int]) -> bool:
    final, _ = activate_fixpoint(g, ka, seed)
    return len(final) == g.n


def critical_mass_step(trace: ActivationTrace) -> tuple[int, float]:
    """Step with the largest relative jump in the active count, as a percentage.

    Ties go to the earliest step. Steps following an empty active set have no
    defined relative growth and are skipped; a cascade that never grows
    yields ``(0, 0.0)``.
    """
    cum = trace.cumulative
    if not cum:
        raise ValueError("empty trace")
    best_step, best_pct = 0, 0.0
    for t in range(1, len(cum)):
        prev = cum[t - 1]
        if prev <= 0:
            continue
        pct = 100.0 * (cum[t] - prev) / prev
        if pct > best_pct:
            best_step, best_pct = t, pct
    return best_step, best_pct
