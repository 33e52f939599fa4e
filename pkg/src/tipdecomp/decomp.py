"""Threshold-aware shell decomposition for seed selection.

Nodes are peeled off in order of slack (in-degree minus threshold). A node
whose slack would drop below zero can no longer be activated by what is
left, so it is frozen and ends up in the seed set. Every removed node has at
least ``k`` in-neighbors among the frozen nodes and the nodes removed after
it, which is why the frozen set activates the whole graph.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import TextIO

from .graph import DirectedGraph
from .heap import AddressablePriorityQueue
from .tipping import ThresholdAssignment

__all__ = ["DecompResult", "tip_decomp", "verify_decomposition", "FROZEN"]

FROZEN = math.inf


@dataclass
class DecompResult:
    """Seed set, removal order (first removed first) and per-node final slack.

    ``final_dist[i]`` is the slack a removed node had when it was taken out,
    or :data:`FROZEN` for seed nodes.
    """

    seed: frozenset[int]
    removal_order: list[int]
    final_dist: list[float]
    queue_operations: int = 0
    queue_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self, g: DirectedGraph | None = None, indent: int | None = None) -> str:
        def name(i: int):
            return g.label(i) if g is not None else i

        payload = {
            "seed": [name(i) for i in sorted(self.seed)],
            "seed_size": len(self.seed),
            "removal_order": [name(i) for i in self.removal_order],
        }
        return json.dumps(payload, indent=indent)

    def write_summary_csv(self, sink: TextIO, network: str, g: DirectedGraph) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(["network", "n", "m", "seed_size", "seed_fraction", "removed"])
        frac = len(self.seed) / g.n if g.n else 0.0
        writer.writerow([network, g.n, g.m, len(self.seed), f"{frac:.6g}", len(self.removal_order)])


def tip_decomp(g: DirectedGraph, ka: ThresholdAssignment) -> DecompResult:
    k = ka.k
    n = g.n
    if len(k) != n:
        raise ValueError("threshold assignment does not match graph size")
    out_adj = g.out_adj
    dist: list[float] = [len(g.in_adj[i]) - k[i] for i in range(n)]
    queue = AddressablePriorityQueue.from_priorities(dist)
    gone = bytearray(n)  # removed or frozen
    frozen = bytearray(n)
    order: list[int] = []
    pop, decrease, drop = queue.pop, queue.decrease_key, queue.remove
    while queue:
        i, _ = pop()
        gone[i] = 1
        order.append(i)
        for j in out_adj[i]:
            if gone[j]:
                continue
            dj = dist[j]
            if dj > 0:
                dist[j] = dj - 1
                decrease(j, dj - 1)
            else:
                dist[j] = FROZEN
                gone[j] = 1
                frozen[j] = 1
                drop(j)
    seed = frozenset(i for i in range(n) if frozen[i])
    counts = {
        "insert": queue.inserts,
        "extract_min": queue.pops,
        "decrease_key": queue.decreases,
        "remove": queue.removes,
    }
    return DecompResult(seed, order, dist, queue.operations, counts)


def verify_decomposition(g: DirectedGraph, ka: ThresholdAssignment, result: DecompResult) -> bool:
    """Check the inductive certificate behind the coverage guarantee.

    Each removed node must have at least ``k`` in-neighbors that are either
    seeds or removed later than itself. Ids outside the graph or listed twice
    raise ``ValueError``; a partition that misses nodes simply fails.
    """
    n = g.n
    rank = [-1] * n
    for pos, v in enumerate(result.removal_order):
        if not 0 <= v < n:
            raise ValueError(f"unknown node id {v} in removal order")
        if rank[v] != -1:
            raise ValueError(f"node {v} removed twice")
        rank[v] = pos
    for v in result.seed:
        if not 0 <= v < n:
            raise ValueError(f"unknown node id {v} in seed")
        if rank[v] != -1:
            raise ValueError(f"node {v} is both seed and removed")
        rank[v] = n  # seeds outlive every removal
    if any(r == -1 for r in rank):
        return False
    k = ka.k
    for v in result.removal_order:
        rv = rank[v]
        support = sum(1 for u in g.in_adj[v] if rank[u] > rv)
        if support < k[v]:
            return False
    return True
