"""Greedy modularity maximization over the super-pixel graph.

Edges are treated as unweighted here: an edge either survived thresholding or
it did not.  Merges only ever happen across existing edges, so disconnected
components never merge.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from segcomm.metrics import Segmentation
from segcomm.spgraph import SPGraph
from segcomm.superpixel import SuperPixelMap


@dataclass(frozen=True)
class Partition:
    """Dense community assignment: node id -> community id."""

    assignment: tuple[int, ...]
    community_count: int

    def __post_init__(self):
        if sorted(set(self.assignment)) != list(range(self.community_count)):
            raise ValueError("community ids must be dense 0..community_count-1")

    @classmethod
    def from_assignment(cls, raw: list[int]) -> "Partition":
        """Renumber arbitrary community ids densely, by first appearance."""
        remap: dict[int, int] = {}
        dense = []
        for c in raw:
            if c not in remap:
                remap[c] = len(remap)
            dense.append(remap[c])
        return cls(assignment=tuple(dense), community_count=len(remap))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(assignment=tuple(range(n)), community_count=n)


@dataclass(frozen=True)
class MergeTrace:
    """Merge sequence with modularity after each step.  ``merges`` holds
    (community_a, community_b, Q_after); community ids are the surviving
    representative node ids (a < b, b merges into a)."""

    node_count: int
    initial_q: float
    merges: tuple[tuple[int, int, float], ...]

    def dump(self) -> str:
        return "".join(
            f"{k} {a} {b} {q:.6f}\n" for k, (a, b, q) in enumerate(self.merges, start=1)
        )


def modularity(g: SPGraph, p: Partition) -> float:
    """Newman's Q from an explicitly built community-mixing matrix."""
    m = len(g.edges)
    if m == 0:
        raise ValueError("modularity is undefined for an edgeless graph")
    if len(p.assignment) != g.node_count:
        raise ValueError("partition does not cover the graph")
    c = p.community_count
    e = np.zeros((c, c))
    half = 1.0 / (2.0 * m)
    for i, j, _ in g.edges:
        ci, cj = p.assignment[i], p.assignment[j]
        e[ci, cj] += half
        e[cj, ci] += half
    a = e.sum(axis=1)
    return float(np.trace(e) - (a * a).sum())


def fast_greedy(g: SPGraph) -> MergeTrace:
    """Agglomerative merging: at each step join the connected community pair
    with the largest modularity gain (ties break toward the lexicographically
    smallest pair).  Runs until one community per connected component remains.
    """
    m = len(g.edges)
    if m == 0:
        raise ValueError("fast greedy needs at least one edge")
    n = g.node_count
    half = 1.0 / (2.0 * m)
    e: list[dict[int, float]] = [dict() for _ in range(n)]
    a = np.zeros(n)
    for i, j, _ in g.edges:
        e[i][j] = e[i].get(j, 0.0) + half
        e[j][i] = e[j].get(i, 0.0) + half
        a[i] += half
        a[j] += half
    alive = np.ones(n, dtype=bool)
    q = float(-(a * a).sum())  # singletons: every e_ii is zero
    initial_q = q

    heap: list[tuple[float, int, int]] = []
    for i in range(n):
        for j, eij in e[i].items():
            if i < j:
                heap.append((-2.0 * (eij - a[i] * a[j]), i, j))
    heapq.heapify(heap)

    merges: list[tuple[int, int, float]] = []
    while heap:
        neg_dq, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or j not in e[i]:
            continue
        dq = 2.0 * (e[i][j] - a[i] * a[j])
        if -neg_dq != dq:
            continue  # stale entry; the refreshed one is still queued
        # merge j into i (i < j by construction)
        alive[j] = False
        q += dq
        merges.append((i, j, q))
        ej = e[j]
        ei = e[i]
        ei.pop(j)
        ej.pop(i)
        for k, ejk in ej.items():
            e[k].pop(j)
            ei[k] = ei.get(k, 0.0) + ejk
            e[k][i] = ei[k]
        ej.clear()
        a[i] += a[j]
        a[j] = 0.0
        for k, eik in ei.items():
            lo, hi = (i, k) if i < k else (k, i)
            heapq.heappush(heap, (-2.0 * (eik - a[i] * a[k]), lo, hi))
    return MergeTrace(node_count=n, initial_q=initial_q, merges=tuple(merges))


def partition_at(trace: MergeTrace, step: int) -> Partition:
    """Partition after the first ``step`` merges (step 0 = singletons)."""
    parent = list(range(trace.node_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in trace.merges[:step]:
        parent[find(j)] = find(i)
    return Partition.from_assignment([find(v) for v in range(trace.node_count)])


def best_partition(trace: MergeTrace) -> Partition:
    """Partition at the step of maximal recorded Q; ties take the earliest
    step (more communities)."""
    qs = [trace.initial_q] + [q for _, _, q in trace.merges]
    best_step = int(np.argmax(qs))  # argmax returns the first maximum
    return partition_at(trace, best_step)


def segment(sp_map: SuperPixelMap, part: Partition) -> Segmentation:
    """Per-pixel region label = community of the pixel's super-pixel."""
    if len(part.assignment) != sp_map.count:
        raise ValueError("partition does not cover the super-pixel map")
    lut = np.array(part.assignment, dtype=np.int32)
    return Segmentation.from_labels(lut[sp_map.labels])
