"""Weighted graph over super-pixels with radius-bounded candidate edges and
per-node adaptive thresholding."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from segcomm.superpixel import SuperPixel, SuperPixelMap


@dataclass(frozen=True)
class GraphParams:
    radius: int = 4  # neighbourhood bound R
    t0: float = 0.5  # initial threshold (also the fixed threshold when not adaptive)
    dt: float = 0.5  # threshold increment
    tmax: float = 40.0  # threshold cap
    adaptive: bool = True
    radius_mode: str = "hops"  # "hops" | "centroid" (sensitivity checks only)

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if not 0 < self.t0 <= self.tmax:
            raise ValueError("need 0 < t0 <= tmax")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.radius_mode not in ("hops", "centroid"):
            raise ValueError("radius_mode must be 'hops' or 'centroid'")


@dataclass(frozen=True)
class SPGraph:
    """Undirected graph; ``edges`` holds (i, j, weight) with i < j, no
    duplicates, no self-loops.  ``capped`` lists nodes left isolated because
    their nearest in-radius neighbour exceeded the threshold cap."""

    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    capped: tuple[int, ...] = ()

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def dump_edges(self) -> str:
        return "".join(f"{i} {j} {w:.6f}\n" for i, j, w in self.edges)


def sp_weight(a: SuperPixel, b: SuperPixel) -> float:
    """Euclidean distance between mean Lab descriptors."""
    d = a.mean_lab.as_array() - b.mean_lab.as_array()
    return float(np.sqrt((d * d).sum()))


def border_adjacency(sp_map: SuperPixelMap) -> list[list[int]]:
    """Neighbour lists of super-pixels that share a border pixel (4-adjacency)."""
    labels = sp_map.labels
    pairs = []
    hd = labels[:, :-1] != labels[:, 1:]
    vd = labels[:-1, :] != labels[1:, :]
    pairs.append(np.stack([labels[:, :-1][hd], labels[:, 1:][hd]], axis=1))
    pairs.append(np.stack([labels[:-1, :][vd], labels[1:, :][vd]], axis=1))
    if pairs:
        allp = np.concatenate(pairs)
        allp = np.unique(np.sort(allp, axis=1), axis=0)
    else:
        allp = np.empty((0, 2), dtype=np.int64)
    adj: list[list[int]] = [[] for _ in range(sp_map.count)]
    for i, j in allp:
        adj[int(i)].append(int(j))
        adj[int(j)].append(int(i))
    return [sorted(a) for a in adj]


def neighborhood(sp_map: SuperPixelMap, i: int, R: int, adjacency: list[list[int]] | None = None) -> set[int]:
    """All super-pixels within R border-adjacency hops of i (excluding i)."""
    if R < 1:
        raise ValueError("R must be >= 1")
    adj = adjacency if adjacency is not None else border_adjacency(sp_map)
    seen = {i}
    frontier = deque([(i, 0)])
    out: set[int] = set()
    while frontier:
        node, d = frontier.popleft()
        if d == R:
            continue
        for nb in adj[node]:
            if nb not in seen:
                seen.add(nb)
                out.add(nb)
                frontier.append((nb, d + 1))
    return out


def _centroid_neighborhood(sp_map: SuperPixelMap, i: int, R: int) -> set[int]:
    # radius measured in units of the expected super-pixel side
    scale = np.sqrt(sp_map.width * sp_map.height / sp_map.count)
    d = np.sqrt(((sp_map.centroids - sp_map.centroids[i]) ** 2).sum(axis=1)) / scale
    out = set(np.nonzero(d <= R)[0].tolist())
    out.discard(i)
    return out


def build_graph(sp_map: SuperPixelMap, p: GraphParams = GraphParams()) -> SPGraph:
    """Connect each node to its in-radius neighbours below the threshold.

    In adaptive mode every node escalates its own threshold from t0 by dt
    until at least one in-radius neighbour falls below it; the escalation
    looks only at the node's own candidate weights, so the resulting edge set
    does not depend on node order.  A node whose nearest in-radius neighbour
    exceeds tmax stays isolated and is recorded in ``capped``.
    """
    n = sp_map.count
    if n == 0:
        raise ValueError("super-pixel map is empty")
    mean_lab = sp_map.mean_lab
    adj = border_adjacency(sp_map) if p.radius_mode == "hops" else None
    edges: dict[tuple[int, int], float] = {}
    capped: list[int] = []
    for i in range(n):
        if p.radius_mode == "hops":
            nbrs = neighborhood(sp_map, i, p.radius, adjacency=adj)
        else:
            nbrs = _centroid_neighborhood(sp_map, i, p.radius)
        if not nbrs:
            capped.append(i)
            continue
        cand = np.array(sorted(nbrs))
        d = mean_lab[cand] - mean_lab[i]
        w = np.sqrt((d * d).sum(axis=1))
        t = p.t0
        if p.adaptive:
            nearest = w.min()
            while nearest > t and t < p.tmax:
                t = min(t + p.dt, p.tmax)
            if nearest > t:
                capped.append(i)
                continue
        for j, wij in zip(cand, w):
            if wij <= t:
                key = (min(i, int(j)), max(i, int(j)))
                edges.setdefault(key, float(wij))
    edge_list = tuple((i, j, w) for (i, j), w in sorted(edges.items()))
    return SPGraph(node_count=n, edges=edge_list, capped=tuple(capped))
