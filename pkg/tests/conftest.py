"""Shared fixtures and synthetic-image builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from segcomm.color import RgbImage, convert_image
from segcomm.metrics import Segmentation
from segcomm.spgraph import SPGraph

STRIPE_COLORS = (
    (200, 40, 40),
    (40, 200, 40),
    (40, 40, 200),
    (220, 220, 60),
    (60, 220, 220),
    (150, 60, 200),
)


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


def flat_image(width: int, height: int, color=(128, 128, 128)) -> RgbImage:
    data = np.empty((height, width, 3), dtype=np.uint8)
    data[:] = color
    return RgbImage.from_array(data)


def stripes_image(width: int, height: int, c: int, colors=STRIPE_COLORS):
    """c vertical flat-color stripes; returns (RgbImage, ground-truth labels)."""
    xs = np.arange(width)
    gt = np.minimum(xs * c // width, c - 1).astype(np.int32)
    gt = np.broadcast_to(gt, (height, width)).copy()
    data = np.empty((height, width, 3), dtype=np.uint8)
    for i in range(c):
        data[gt == i] = colors[i]
    return RgbImage.from_array(data), gt


def two_color_image(width: int, height: int, split_x: int, left=(200, 40, 40), right=(40, 40, 200)) -> RgbImage:
    data = np.empty((height, width, 3), dtype=np.uint8)
    data[:, :split_x] = left
    data[:, split_x:] = right
    return RgbImage.from_array(data)


def texture_image(rng, width: int, height: int, block: int = 8, jitter: int = 6) -> RgbImage:
    """Blocky color field with per-pixel noise; stands in for natural texture."""
    coarse = rng.integers(40, 216, size=(height // block + 1, width // block + 1, 3))
    data = np.kron(coarse, np.ones((block, block, 1), dtype=np.int64))[:height, :width]
    data = data + rng.integers(-jitter, jitter + 1, size=data.shape)
    return RgbImage.from_array(np.clip(data, 0, 255).astype(np.uint8))


def random_segmentation(rng, width: int, height: int, k: int) -> Segmentation:
    """Random label map with labels renumbered densely."""
    raw = rng.integers(0, k, size=(height, width))
    _, dense = np.unique(raw, return_inverse=True)
    return Segmentation.from_labels(dense.reshape(height, width).astype(np.int32))


def random_graph(rng, n: int, p: float = 0.3) -> SPGraph:
    """Random undirected graph with at least one edge."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, float(rng.random() * 10)))
    if not edges:
        i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
        edges.append((int(i), int(j), 1.0))
    return SPGraph(node_count=n, edges=tuple(edges))


def random_connected_graph(rng, n: int, p: float = 0.3) -> SPGraph:
    """Random spanning tree plus extra random edges."""
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        a = int(order[k])
        b = int(order[rng.integers(0, k)])
        edges.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return SPGraph(node_count=n, edges=tuple((i, j, 1.0) for i, j in sorted(edges)))


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the jit kernels once so timed tests measure steady state."""
    from segcomm.grid import regular_grid
    from segcomm.superpixel import sutp_extract

    img = flat_image(24, 24)
    sutp_extract(convert_image(img), regular_grid(24, 24, 6))
