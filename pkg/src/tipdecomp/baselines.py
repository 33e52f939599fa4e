"""Centrality rankings used as seed-selection baselines, plus an upper bound
on the minimum seed size for undirected graphs with a homogeneous threshold."""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .errors import ConvergenceError, NotApplicableError, UndefinedMeasureError
from .graph import DirectedGraph
from .tipping import ThresholdAssignment

__all__ = [
    "CentralityScores",
    "MEASURES",
    "degree_centrality",
    "betweenness",
    "closeness",
    "shell_number",
    "eigenvector_centrality",
    "pagerank",
    "compute_centrality",
    "greedy_centrality_seed",
    "reichman_bound",
]


@dataclass(frozen=True)
class CentralityScores:
    measure: str
    scores: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.scores)

    def __getitem__(self, i: int) -> float:
        return self.scores[i]

    def ranking(self) -> list[int]:
        """Node ids by descending score, smaller id first on ties."""
        s = self.scores
        return sorted(range(len(s)), key=lambda i: (-s[i], i))

    def to_csv(self, sink: TextIO, g: DirectedGraph | None = None, header: bool = True) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        if header:
            writer.writerow(["node", "measure", "score"])
        for i, v in enumerate(self.scores):
            writer.writerow([g.label(i) if g is not None else i, self.measure, repr(float(v))])


def degree_centrality(g: DirectedGraph) -> CentralityScores:
    """Out-degree of each node."""
    return CentralityScores("degree", tuple(float(d) for d in g.out_degrees()))


def betweenness(g: DirectedGraph) -> CentralityScores:
    """Brandes accumulation over ordered source/target pairs, O(nm).

    Unnormalized: on a symmetric graph each unordered pair contributes twice.
    """
    n = g.n
    out_adj = g.out_adj
    bc = [0.0] * n
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v]
            for w in out_adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return CentralityScores("betweenness", tuple(bc))


def _bfs_distances(g: DirectedGraph, s: int) -> list[int]:
    dist = [-1] * g.n
    dist[s] = 0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in g.out_adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def closeness(g: DirectedGraph) -> CentralityScores:
    """Reachable count over total distance to reachable nodes; 0 if none."""
    scores = []
    for i in range(g.n):
        dist = _bfs_distances(g, i)
        reach = [d for d in dist if d > 0]
        scores.append(len(reach) / sum(reach) if reach else 0.0)
    return CentralityScores("closeness", tuple(scores))


def shell_number(g: DirectedGraph) -> CentralityScores:
    """Core index on the underlying undirected graph (bucket peeling, O(n + m))."""
    n = g.n
    nbrs = [sorted(set(g.out_adj[i]).union(g.in_adj[i])) for i in range(n)]
    deg = [len(a) for a in nbrs]
    if n == 0:
        return CentralityScores("shell", ())
    maxdeg = max(deg)
    bins = [0] * (maxdeg + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(maxdeg + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(maxdeg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    for i in range(n):
        v = vert[i]
        for u in nbrs[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] -= 1
    return CentralityScores("shell", tuple(float(d) for d in deg))


def eigenvector_centrality(g: DirectedGraph, tol: float = 1e-10, max_iter: int = 10_000) -> CentralityScores:
    """Dominant eigenvector of the adjacency operator, scaled to unit max.

    Iterates ``x <- x + A^T x`` (each node sums its in-neighbors). The
    identity shift keeps the eigenvectors but stops bipartite graphs such as
    stars from oscillating.
    """
    if g.m == 0:
        raise UndefinedMeasureError("eigenvector centrality needs at least one edge")
    src, dst = g.edge_arrays()
    x = np.ones(g.n)
    for _ in range(max_iter):
        y = x + np.bincount(dst, weights=x[src], minlength=g.n)
        y /= y.max()
        if np.max(np.abs(y - x)) < tol:
            return CentralityScores("eigenvector", tuple(y.tolist()))
        x = y
    raise ConvergenceError(f"eigenvector centrality did not converge in {max_iter} iterations")


def pagerank(g: DirectedGraph, damping: float = 0.85, tol: float = 1e-10, max_iter: int = 10_000) -> CentralityScores:
    """Power iteration with uniform teleport; dangling mass is spread uniformly."""
    n = g.n
    if n == 0:
        return CentralityScores("pagerank", ())
    src, dst = g.edge_arrays()
    outdeg = np.asarray(g.out_degrees(), dtype=float)
    dangling = outdeg == 0
    inv_out = np.divide(1.0, outdeg, out=np.zeros(n), where=~dangling)
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        flow = np.bincount(dst, weights=(x * inv_out)[src], minlength=n)
        y = damping * (flow + x[dangling].sum() / n) + (1.0 - damping) / n
        y /= y.sum()
        if np.abs(y - x).sum() < tol:
            return CentralityScores("pagerank", tuple(y.tolist()))
        x = y
    raise ConvergenceError(f"pagerank did not converge in {max_iter} iterations")


MEASURES: dict[str, Callable[[DirectedGraph], CentralityScores]] = {
    "degree": degree_centrality,
    "betweenness": betweenness,
    "closeness": closeness,
    "shell": shell_number,
    "eigenvector": eigenvector_centrality,
    "pagerank": pagerank,
}


def compute_centrality(g: DirectedGraph, measure: str) -> CentralityScores:
    try:
        fn = MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}; expected one of {', '.join(MEASURES)}") from None
    return fn(g)


def greedy_centrality_seed(g: DirectedGraph, ka: ThresholdAssignment, scores: CentralityScores) -> frozenset[int]:
    """Shortest prefix of the static centrality ranking whose cascade covers V.

    The cascade is grown incrementally: activating one more seed on top of
    an already-converged active set and re-converging gives the same set as
    restarting from the enlarged seed, so the whole scan costs O(n + m).
    """
    n = g.n
    if len(scores) != n:
        raise ValueError("scores do not cover the graph")
    k = ka.k
    out_adj = g.out_adj
    active = bytearray(n)
    hits = [0] * n
    count = 0

    def spread(wave: list[int]) -> int:
        added = 0
        while wave:
            for v in wave:
                active[v] = 1
            added += len(wave)
            nxt = []
            for u in wave:
                for v in out_adj[u]:
                    if not active[v]:
                        hits[v] += 1
                        if hits[v] == k[v]:
                            nxt.append(v)
            wave = nxt
        return added

    count += spread([v for v in range(n) if k[v] == 0])
    prefix: list[int] = []
    for v in scores.ranking():
        if count == n:
            break
        prefix.append(v)
        if not active[v]:
            count += spread([v])
    return frozenset(prefix)


def reichman_bound(g: DirectedGraph, k: int) -> float:
    """``sum_i min(1, k / (d_i + 1))`` for an undirected graph and threshold ``k``."""
    if not g.is_symmetric():
        raise NotApplicableError("the bound holds only for undirected (symmetric) graphs")
    if k < 1:
        raise ValueError("threshold must be >= 1")
    return float(sum(min(1.0, k / (len(a) + 1)) for a in g.out_adj))
