"""Segmentation-quality measures: region overlap, covering, and a symmetric
object-overlap score with an adjustable over-segmentation penalty."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Segmentation:
    """Per-pixel region labels, dense in 0..region_count-1, every region
    non-empty."""

    width: int
    height: int
    labels: np.ndarray
    region_count: int

    def __post_init__(self):
        if self.labels.shape != (self.height, self.width):
            raise ValueError("label array shape mismatch")
        counts = np.bincount(self.labels.ravel(), minlength=self.region_count)
        if len(counts) != self.region_count or (counts == 0).any():
            raise ValueError("region ids must be dense and non-empty")

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> "Segmentation":
        labels = np.ascontiguousarray(labels, dtype=np.int32)
        h, w = labels.shape
        return cls(width=w, height=h, labels=labels, region_count=int(labels.max()) + 1)

    def region_sizes(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.region_count)


@dataclass(frozen=True)
class AomParams:
    alpha: float = 0.0  # over-segmentation penalty weight

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")


def overlap(r: np.ndarray, r_prime: np.ndarray) -> float:
    """Jaccard overlap of two pixel sets given as flat index arrays."""
    r = np.asarray(r).ravel()
    r_prime = np.asarray(r_prime).ravel()
    if r.size == 0 or r_prime.size == 0:
        raise ValueError("regions must be non-empty")
    inter = np.intersect1d(r, r_prime).size
    union = np.union1d(r, r_prime).size
    return inter / union


def _check_dims(s: Segmentation, s_prime: Segmentation) -> None:
    if (s.width, s.height) != (s_prime.width, s_prime.height):
        raise ValueError("segmentations must share dimensions")


def intersection_matrix(s: Segmentation, s_prime: Segmentation) -> np.ndarray:
    """Shared-pixel counts, shape (n, n'); entries sum to the pixel count."""
    _check_dims(s, s_prime)
    pair = s.labels.ravel().astype(np.int64) * s_prime.region_count + s_prime.labels.ravel()
    counts = np.bincount(pair, minlength=s.region_count * s_prime.region_count)
    return counts.reshape(s.region_count, s_prime.region_count)


def covering(s: Segmentation, s_prime: Segmentation) -> float:
    """Size-weighted best overlap of every region of ``s`` by a region of
    ``s_prime`` (asymmetric)."""
    _check_dims(s, s_prime)
    m = intersection_matrix(s, s_prime)
    sizes = s.region_sizes()
    sizes_p = s_prime.region_sizes()
    union = sizes[:, None] + sizes_p[None, :] - m
    o = m / union
    n = s.width * s.height
    return float((sizes * o.max(axis=1)).sum() / n)


def penalty(s_count: int, p: AomParams) -> float:
    """Over-segmentation penalty for a matched region that intersects
    ``s_count`` regions on the other side."""
    if s_count < 1:
        raise ValueError("s_count must be >= 1")
    a_s = p.alpha * s_count
    return 1.0 / a_s if a_s >= 1.0 else 1.0


def _greedy_matching(m: np.ndarray) -> list[tuple[int, int]]:
    """The min(n, n') largest entries under a one-to-one row/column
    constraint; ties prefer the smaller (row, col)."""
    n, n_p = m.shape
    order = sorted(
        ((int(m[i, j]), i, j) for i in range(n) for j in range(n_p)),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    picks: list[tuple[int, int]] = []
    for _, i, j in order:
        if len(picks) == min(n, n_p):
            break
        if i in used_rows or j in used_cols:
            continue
        picks.append((i, j))
        used_rows.add(i)
        used_cols.add(j)
    return picks


def aom(s: Segmentation, s_prime: Segmentation, p: AomParams = AomParams()) -> float:
    """Symmetric similarity of two segmentations in [0, 1].

    Greedily matches regions one-to-one by decreasing intersection size; each
    matched intersection is weighted by the over-segmentation penalty of its
    source region and the total is normalized by the pixel count.
    """
    _check_dims(s, s_prime)
    m = intersection_matrix(s, s_prime)
    picks = _greedy_matching(m)
    row_multiplicity = (m > 0).sum(axis=1)
    n = s.width * s.height
    total = 0.0
    for i, j in picks:
        total += m[i, j] * penalty(int(row_multiplicity[i]), p)
    return total / n


def select_reference(segs: list[Segmentation], p: AomParams = AomParams()) -> int:
    """Index of the segmentation with the greatest total pairwise similarity
    to its peers; ties take the lowest index."""
    if not segs:
        raise ValueError("need at least one segmentation")
    k = len(segs)
    scores = np.zeros(k)
    for i in range(k):
        for j in range(k):
            scores[i] += aom(segs[i], segs[j], p)
    return int(np.argmax(scores))
