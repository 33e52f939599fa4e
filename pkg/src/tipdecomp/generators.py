"""Seeded synthetic graphs for tests and benchmarks.

All generators return symmetric graphs unless ``directed=True`` is passed,
and are deterministic for a given ``seed``.
"""

from __future__ import annotations

import random
from typing import Any

import numpy as np

from .graph import DirectedGraph

__all__ = [
    "cycle",
    "path",
    "star",
    "clique",
    "uniform_random",
    "preferential_attachment",
    "make_synthetic",
    "KINDS",
]

# above this many nodes uniform_random samples edge positions instead of a dense mask
_DENSE_LIMIT = 2000


def _check_n(n: int, minimum: int = 0) -> None:
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n!r}")


def cycle(n: int, directed: bool = True) -> DirectedGraph:
    """Ring ``0 -> 1 -> ... -> n-1 -> 0``.

    Directed by default, which is the one exception to the module-wide
    symmetric default: a "3-cycle" is conventionally a->b->c->a.
    """
    _check_n(n, 3)
    edges = [(i, (i + 1) % n) for i in range(n)]
    return DirectedGraph.from_edges(n, edges, symmetrize=not directed)


def path(n: int, directed: bool = False) -> DirectedGraph:
    _check_n(n, 1)
    edges = [(i, i + 1) for i in range(n - 1)]
    return DirectedGraph.from_edges(n, edges, symmetrize=not directed)


def star(leaves: int, directed: bool = False) -> DirectedGraph:
    """Node 0 is the center, ``1..leaves`` the leaves (edges point outward if directed)."""
    _check_n(leaves, 1)
    edges = [(0, i) for i in range(1, leaves + 1)]
    return DirectedGraph.from_edges(leaves + 1, edges, symmetrize=not directed)


def clique(n: int) -> DirectedGraph:
    _check_n(n, 1)
    edges = [(i, j) for i in range(n) for j in range(n) if i != j]
    return DirectedGraph.from_edges(n, edges)


def uniform_random(n: int, p: float, seed: int | None = None, directed: bool = False) -> DirectedGraph:
    """Erdos-Renyi G(n, p).

    Undirected pairs (or ordered pairs when ``directed``) are included
    independently with probability ``p``.
    """
    _check_n(n)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p!r}")
    rng = np.random.default_rng(seed)
    if n < 2 or p == 0.0:
        return DirectedGraph.from_edges(n, np.empty((0, 2), dtype=np.int64))
    if n <= _DENSE_LIMIT:
        mask = rng.random((n, n)) < p
        if directed:
            np.fill_diagonal(mask, False)
        else:
            mask = np.triu(mask, k=1)
        src, dst = np.nonzero(mask)
    else:
        src, dst = _sparse_pairs(rng, n, p, directed)
    edges = np.column_stack([src, dst])
    return DirectedGraph.from_edges(n, edges, symmetrize=not directed)


def _sparse_pairs(rng: np.random.Generator, n: int, p: float, directed: bool):
    # Draw the edge count, then that many distinct admissible cells of the
    # n x n grid; taking first occurrences in draw order keeps the subset uniform.
    total = n * (n - 1) if directed else n * (n - 1) // 2
    k = int(rng.binomial(total, p))
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < k:
        need = k - chosen.size
        draw = rng.integers(0, n * n, size=int(need * 2.2) + 16, dtype=np.int64)
        i, j = draw // n, draw % n
        ok = (i != j) if directed else (i < j)
        merged = np.concatenate([chosen, draw[ok]])
        _, first = np.unique(merged, return_index=True)
        chosen = merged[np.sort(first)]
    chosen = chosen[:k]
    return chosen // n, chosen % n


def preferential_attachment(n: int, m_attach: int, seed: int | None = None) -> DirectedGraph:
    """Barabasi-Albert growth: each new node links to ``m_attach`` distinct
    existing nodes chosen proportionally to degree. Always symmetric."""
    _check_n(n, 1)
    if m_attach < 1 or m_attach >= n:
        raise ValueError(f"m_attach must satisfy 1 <= m_attach < n, got {m_attach!r}")
    rnd = random.Random(seed)
    edges: list[tuple[int, int]] = []
    targets = list(range(m_attach))
    repeated: list[int] = []
    for source in range(m_attach, n):
        edges.extend((source, t) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m_attach)
        picked: set[int] = set()
        while len(picked) < m_attach:
            picked.add(rnd.choice(repeated))
        targets = sorted(picked)
    return DirectedGraph.from_edges(n, edges, symmetrize=True)


KINDS = ("cycle", "star", "path", "clique", "uniform-random", "preferential-attachment")


def make_synthetic(kind: str, params: dict[str, Any] | None = None, seed: int | None = None) -> DirectedGraph:
    """Dispatch by kind name; ``params`` holds the generator keyword arguments."""
    params = dict(params or {})
    try:
        if kind == "cycle":
            return cycle(**params)
        if kind == "star":
            return star(**params)
        if kind == "path":
            return path(**params)
        if kind == "clique":
            return clique(**params)
        if kind == "uniform-random":
            return uniform_random(seed=seed, **params)
        if kind == "preferential-attachment":
            return preferential_attachment(seed=seed, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from exc
    raise ValueError(f"unknown graph kind {kind!r}; expected one of {', '.join(KINDS)}")
