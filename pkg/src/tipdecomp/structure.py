"""Community-structure measurements on undirected (symmetric) graphs."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from typing import Hashable, Sequence, TextIO

import numpy as np

from .errors import DegenerateFitError, NotApplicableError, UndefinedMeasureError
from .graph import DirectedGraph

__all__ = [
    "Partition",
    "PlanarFit",
    "local_clustering",
    "average_clustering",
    "modularity",
    "louvain",
    "planar_fit",
]

LOUVAIN_TOL = 1e-12


def _require_symmetric(g: DirectedGraph, what: str) -> None:
    if not g.is_symmetric():
        raise NotApplicableError(f"{what} is defined for undirected (symmetric) graphs only")


@dataclass(frozen=True)
class Partition:
    """Community label per node."""

    membership: tuple[Hashable, ...]

    @classmethod
    def from_groups(cls, n: int, groups: Sequence[Sequence[int]]) -> "Partition":
        labels: list[int | None] = [None] * n
        for c, members in enumerate(groups):
            for v in members:
                if labels[v] is not None:
                    raise ValueError(f"node {v} assigned twice")
                labels[v] = c
        if any(lbl is None for lbl in labels):
            raise ValueError("groups do not cover every node")
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.membership)

    def normalized(self) -> "Partition":
        """Relabel communities 0, 1, ... in order of their smallest member."""
        seen: dict[Hashable, int] = {}
        return Partition(tuple(seen.setdefault(c, len(seen)) for c in self.membership))

    def groups(self) -> list[list[int]]:
        out: dict[Hashable, list[int]] = {}
        for v, c in enumerate(self.membership):
            out.setdefault(c, []).append(v)
        return list(out.values())

    def to_csv(self, sink: TextIO, g: DirectedGraph | None = None) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["node", "community"])
        for v, c in enumerate(self.membership):
            writer.writerow([g.label(v) if g is not None else v, c])


def local_clustering(g: DirectedGraph, i: int) -> float:
    _require_symmetric(g, "clustering coefficient")
    nbrs = g.out_adj[i]
    d = len(nbrs)
    if d < 2:
        return 0.0
    own = set(nbrs)
    links = sum(1 for u in nbrs for w in g.out_adj[u] if w in own)
    # every neighbor-neighbor edge was seen from both ends
    return links / (d * (d - 1))


def average_clustering(g: DirectedGraph) -> float:
    _require_symmetric(g, "clustering coefficient")
    if g.n == 0:
        return 0.0
    return sum(local_clustering(g, i) for i in range(g.n)) / g.n


def modularity(g: DirectedGraph, partition: Partition | Sequence[Hashable]) -> float:
    """Newman-Girvan modularity of a partition of an undirected graph."""
    _require_symmetric(g, "modularity")
    membership = partition.membership if isinstance(partition, Partition) else tuple(partition)
    if len(membership) != g.n:
        raise ValueError("partition size does not match graph")
    two_m = g.m  # each undirected edge is stored in both directions
    if two_m == 0:
        raise UndefinedMeasureError("modularity is undefined on a graph without edges")
    inside: dict[Hashable, int] = {}
    degree: dict[Hashable, int] = {}
    for v, nbrs in enumerate(g.out_adj):
        c = membership[v]
        degree[c] = degree.get(c, 0) + len(nbrs)
        inside[c] = inside.get(c, 0) + sum(1 for u in nbrs if membership[u] == c)
    return sum(inside[c] / two_m - (degree[c] / two_m) ** 2 for c in degree)


# -- Louvain ---------------------------------------------------------------


class _Level:
    """Weighted undirected multigraph used between aggregation rounds."""

    def __init__(self, adj: list[dict[int, float]], loops: list[float]):
        self.adj = adj
        self.loops = loops
        self.strength = [sum(a.values()) + 2 * s for a, s in zip(adj, loops)]
        self.two_m = sum(self.strength)

    def quality(self, comm: list[int]) -> float:
        inside: dict[int, float] = {}
        tot: dict[int, float] = {}
        for v, a in enumerate(self.adj):
            c = comm[v]
            tot[c] = tot.get(c, 0.0) + self.strength[v]
            inside[c] = inside.get(c, 0.0) + 2 * self.loops[v] + sum(w for u, w in a.items() if comm[u] == c)
        m2 = self.two_m
        return sum(inside[c] / m2 - (tot[c] / m2) ** 2 for c in tot)


def _move_nodes(level: _Level) -> tuple[list[int], bool]:
    """Local moving phase; returns communities and whether any node moved."""
    n = len(level.adj)
    comm = list(range(n))
    tot = list(level.strength)
    m2 = level.two_m
    moved_any = False
    current = level.quality(comm)
    while True:
        moved = False
        for v in range(n):
            kv = level.strength[v]
            cv = comm[v]
            links: dict[int, float] = {}
            for u, w in level.adj[v].items():
                links[comm[u]] = links.get(comm[u], 0.0) + w
            tot[cv] -= kv
            best, best_gain = cv, links.get(cv, 0.0) - tot[cv] * kv / m2
            for c in sorted(links):
                gain = links[c] - tot[c] * kv / m2
                if gain > best_gain + LOUVAIN_TOL:
                    best, best_gain = c, gain
            tot[best] += kv
            if best != cv:
                comm[v] = best
                moved = True
        if not moved:
            break
        new = level.quality(comm)
        moved_any = True
        if new - current <= LOUVAIN_TOL:
            break
        current = new
    return comm, moved_any


def _aggregate(level: _Level, comm: list[int]) -> tuple[_Level, list[int]]:
    ids: dict[int, int] = {}
    renum = [ids.setdefault(c, len(ids)) for c in comm]
    q = len(ids)
    adj: list[dict[int, float]] = [{} for _ in range(q)]
    loops = [0.0] * q
    for v, a in enumerate(level.adj):
        cv = renum[v]
        loops[cv] += level.loops[v]
        for u, w in a.items():
            cu = renum[u]
            if cu == cv:
                loops[cv] += w / 2  # seen from both endpoints
            else:
                adj[cv][cu] = adj[cv].get(cu, 0.0) + w
    return _Level(adj, loops), renum


def louvain(g: DirectedGraph, seed: int | None = None) -> tuple[Partition, float]:
    """Two-phase greedy modularity maximization.

    Nodes are swept in ascending id order and a move needs a strictly
    positive gain, so the result is fully deterministic; ``seed`` is
    accepted for interface symmetry and does not affect the outcome.
    Returns the flat partition and its modularity on ``g``.
    """
    _require_symmetric(g, "Louvain partitioning")
    if g.m == 0:
        raise UndefinedMeasureError("Louvain needs at least one edge")
    level = _Level([{u: 1.0 for u in nbrs} for nbrs in g.out_adj], [0.0] * g.n)
    membership = list(range(g.n))
    best_q = level.quality(list(range(g.n)))
    while True:
        comm, moved = _move_nodes(level)
        if not moved:
            break
        q_new = level.quality(comm)
        level, renum = _aggregate(level, comm)
        membership = [renum[c] for c in membership]
        if q_new - best_q <= LOUVAIN_TOL:
            break
        best_q = q_new
    part = Partition(tuple(membership)).normalized()
    return part, modularity(g, part)


# -- regression ------------------------------------------------------------


@dataclass(frozen=True)
class PlanarFit:
    """``S ~ a * M + b * C + c`` by least squares."""

    a: float
    b: float
    c: float
    r_squared: float

    def predict(self, m: float, c: float) -> float:
        return self.a * m + self.b * c + self.c

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(asdict(self), indent=indent)


def planar_fit(points: Sequence[tuple[float, float, float]]) -> PlanarFit:
    """Ordinary least squares via the normal equations.

    ``points`` are ``(M, C, S)`` triples. R^2 is reported as 1 when the
    response is constant.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 3:
        raise DegenerateFitError(f"need at least 3 points, got {len(pts)}")
    X = np.column_stack([pts[:, 0], pts[:, 1], np.ones(len(pts))])
    y = pts[:, 2]
    if np.linalg.matrix_rank(X) < 3:
        raise DegenerateFitError("design matrix is rank deficient (collinear points)")
    coef = np.linalg.solve(X.T @ X, X.T @ y)
    resid = y - X @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PlanarFit(float(coef[0]), float(coef[1]), float(coef[2]), r2)
