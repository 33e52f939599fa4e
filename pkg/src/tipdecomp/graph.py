"""Immutable directed graph, edge-list ingestion and node removal.

Nodes are dense integers ``0..n-1``. Adjacency is stored twice (out and in)
as tuples sorted ascending, so every traversal is reproducible.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .errors import GraphFormatError

__all__ = [
    "DirectedGraph",
    "GraphBuilder",
    "load_edge_list",
    "read_edge_list",
    "write_edge_list",
    "remove_nodes",
]


class DirectedGraph:
    """Simple digraph (no self-loops, no parallel edges).

    Build instances through :meth:`from_edges`, :class:`GraphBuilder` or
    :func:`load_edge_list`; the constructor trusts its arguments.
    """

    __slots__ = ("n", "m", "out_adj", "in_adj", "labels", "_edge_arrays")

    def __init__(
        self,
        out_adj: tuple[tuple[int, ...], ...],
        in_adj: tuple[tuple[int, ...], ...],
        labels: tuple[str, ...] | None = None,
    ):
        self.n = len(out_adj)
        self.m = sum(len(a) for a in out_adj)
        self.out_adj = out_adj
        self.in_adj = in_adj
        self.labels = labels
        self._edge_arrays: tuple[np.ndarray, np.ndarray] | None = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        labels: Sequence[str] | None = None,
        symmetrize: bool = False,
    ) -> "DirectedGraph":
        """Build a graph on ``n`` nodes from integer endpoint pairs.

        Self-loops are dropped and duplicates collapse to one edge. With
        ``symmetrize`` every ``u -> v`` also yields ``v -> u``.
        """
        if n < 0:
            raise ValueError("node count must be non-negative")
        if labels is not None and len(labels) != n:
            raise ValueError("labels must have one entry per node")
        if not isinstance(edges, np.ndarray):
            edges = list(edges)
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        src, dst = arr[:, 0], arr[:, 1]
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if symmetrize:
            src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        code = np.unique(src * max(n, 1) + dst)
        src, dst = code // max(n, 1), code % max(n, 1)
        out_adj = _group(src, dst, n)
        order = np.lexsort((src, dst))
        in_adj = _group(dst[order], src[order], n)
        g = cls(out_adj, in_adj, tuple(labels) if labels is not None else None)
        g._edge_arrays = (src, dst)
        return g

    @classmethod
    def empty(cls) -> "DirectedGraph":
        return cls((), (), None)

    # -- queries ---------------------------------------------------------

    def in_degree(self, i: int) -> int:
        return len(self.in_adj[i])

    def out_degree(self, i: int) -> int:
        return len(self.out_adj[i])

    def in_degrees(self) -> list[int]:
        return [len(a) for a in self.in_adj]

    def out_degrees(self) -> list[int]:
        return [len(a) for a in self.out_adj]

    def nodes(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                yield u, v

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge sources and targets as int64 arrays, sorted by (source, target)."""
        if self._edge_arrays is None:
            src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degrees())
            dst = np.fromiter(
                (v for nbrs in self.out_adj for v in nbrs), dtype=np.int64, count=self.m
            )
            self._edge_arrays = (src, dst)
        return self._edge_arrays

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.out_adj[u]
        idx = _bisect(nbrs, v)
        return idx < len(nbrs) and nbrs[idx] == v

    def is_symmetric(self) -> bool:
        return self.out_adj == self.in_adj

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index_of(self) -> dict[str, int]:
        """Map from node label to dense id."""
        return {self.label(i): i for i in range(self.n)}

    def check_invariants(self) -> None:
        """Full scan of the structural invariants; raises AssertionError on violation."""
        assert len(self.in_adj) == self.n
        assert sum(len(a) for a in self.in_adj) == self.m
        mirrored: list[list[int]] = [[] for _ in range(self.n)]
        for u, nbrs in enumerate(self.out_adj):
            assert list(nbrs) == sorted(set(nbrs)), f"unsorted or duplicate out-edges at {u}"
            for v in nbrs:
                assert v != u, f"self-loop at {u}"
                mirrored[v].append(u)
        assert tuple(tuple(a) for a in mirrored) == self.in_adj, "in/out adjacency mismatch"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.out_adj == other.out_adj
            and self.in_adj == other.in_adj
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.out_adj, self.labels))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


def _group(keys: np.ndarray, vals: np.ndarray, n: int) -> tuple[tuple[int, ...], ...]:
    # keys must be sorted ascending
    bounds = np.searchsorted(keys, np.arange(n + 1)).tolist()
    flat = vals.tolist()
    return tuple(tuple(flat[bounds[i] : bounds[i + 1]]) for i in range(n))


def _bisect(seq: Sequence[int], x: int) -> int:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


class GraphBuilder:
    """Stages labelled edges; ids are assigned in order of first appearance."""

    def __init__(self, symmetrize: bool = False):
        self.symmetrize = symmetrize
        self._ids: dict[str, int] = {}
        self._src: list[int] = []
        self._dst: list[int] = []

    def _id(self, label: str) -> int:
        i = self._ids.get(label)
        if i is None:
            i = self._ids[label] = len(self._ids)
        return i

    def add_node(self, label: str) -> int:
        return self._id(label)

    def add_edge(self, source: str, target: str) -> None:
        self._src.append(self._id(source))
        self._dst.append(self._id(target))

    def build(self) -> DirectedGraph:
        n = len(self._ids)
        edges = np.column_stack(
            [np.asarray(self._src, dtype=np.int64), np.asarray(self._dst, dtype=np.int64)]
        )
        return DirectedGraph.from_edges(n, edges, labels=list(self._ids), symmetrize=self.symmetrize)


def load_edge_list(source: TextIO | Iterable[str], symmetrize: bool = False) -> DirectedGraph:
    """Parse a SNAP-style edge list.

    One ``source target`` pair per line, separated by any whitespace. Lines
    starting with ``#`` are comments and whitespace-only lines are skipped.
    A node appearing only in a self-loop line is still materialized, though
    the loop itself is dropped.
    """
    builder = GraphBuilder(symmetrize=symmetrize)
    for lineno, line in enumerate(source, start=1):
        if line.startswith("#"):
            continue
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise GraphFormatError(lineno, line.rstrip("\n"), f"expected 2 tokens, got {len(tokens)}")
        builder.add_edge(tokens[0], tokens[1])
    return builder.build()


def read_edge_list(path: str | os.PathLike, symmetrize: bool = False) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, symmetrize=symmetrize)


def write_edge_list(g: DirectedGraph, sink: TextIO) -> None:
    for u, v in g.edges():
        sink.write(f"{g.label(u)}\t{g.label(v)}\n")


def remove_nodes(g: DirectedGraph, victims: Iterable[int]) -> tuple[DirectedGraph, list[int]]:
    """Induced subgraph on the surviving nodes.

    Returns the re-indexed graph and ``kept`` where ``kept[new_id]`` is the
    node's id in ``g``. Relative order of survivors is preserved.
    """
    dead = set(victims)
    for v in dead:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} not in graph")
    kept = [i for i in range(g.n) if i not in dead]
    remap = {old: new for new, old in enumerate(kept)}
    out_adj = tuple(tuple(remap[v] for v in g.out_adj[u] if v in remap) for u in kept)
    in_adj = tuple(tuple(remap[v] for v in g.in_adj[u] if v in remap) for u in kept)
    labels = tuple(g.labels[i] for i in kept) if g.labels is not None else None
    return DirectedGraph(out_adj, in_adj, labels), kept
