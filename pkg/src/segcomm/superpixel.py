"""Super-pixel extraction: boundary evolution from a grid, and windowed
k-means clustering in (L, a, b, x, y) as an alternative."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from segcomm import _kernels
from segcomm.color import LabColor, LabImage
from segcomm.grid import Grid


@dataclass(frozen=True)
class SutpParams:
    lambda1: float = 1.0  # color weight
    lambda2: float = 0.1  # convexity weight
    max_iters: int = 10
    stop_frac: float = 0.001  # stop when moves <= stop_frac * boundary pixels

    def __post_init__(self):
        if self.lambda1 <= 0 or self.lambda2 < 0:
            raise ValueError("lambda1 must be > 0 and lambda2 >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 <= self.stop_frac <= 1:
            raise ValueError("stop_frac must be in [0, 1]")


@dataclass(frozen=True)
class SlicParams:
    k: int  # target super-pixel count
    m: float = 10.0  # compactness, 1..20
    max_iters: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 1 <= self.m <= 20:
            raise ValueError("compactness m must be in 1..20")


@dataclass(frozen=True)
class SuperPixel:
    id: int
    mean_lab: LabColor
    centroid: tuple[float, float]
    size: int


@dataclass(frozen=True)
class SuperPixelMap:
    """Per-pixel super-pixel labels plus per-super-pixel statistics.

    ``labels`` has shape (height, width), int32; statistics are kept both as
    a list of :class:`SuperPixel` and as dense arrays for the graph stage.
    """

    width: int
    height: int
    labels: np.ndarray
    mean_lab: np.ndarray  # (n, 3)
    centroids: np.ndarray  # (n, 2) as (cx, cy)
    sizes: np.ndarray  # (n,)

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def superpixels(self) -> list[SuperPixel]:
        return [
            SuperPixel(
                id=i,
                mean_lab=LabColor(*(float(v) for v in self.mean_lab[i])),
                centroid=(float(self.centroids[i, 0]), float(self.centroids[i, 1])),
                size=int(self.sizes[i]),
            )
            for i in range(self.count)
        ]


@dataclass(frozen=True)
class SutpIteration:
    """Per-iteration convergence record: boundary size and moves performed."""

    boundary_count: int
    moved: int


def compute_statistics(labels: np.ndarray, lab: np.ndarray, n: int):
    """Mean Lab, centroid and size per label, from scratch."""
    flat = labels.ravel()
    sizes = np.bincount(flat, minlength=n).astype(np.int64)
    if (sizes == 0).any():
        raise ValueError("every super-pixel must be non-empty")
    mean_lab = np.empty((n, 3))
    for c in range(3):
        mean_lab[:, c] = np.bincount(flat, weights=lab[..., c].ravel(), minlength=n) / sizes
    h, w = labels.shape
    ys, xs = np.mgrid[0:h, 0:w]
    centroids = np.empty((n, 2))
    centroids[:, 0] = np.bincount(flat, weights=xs.ravel(), minlength=n) / sizes
    centroids[:, 1] = np.bincount(flat, weights=ys.ravel(), minlength=n) / sizes
    return mean_lab, centroids, sizes


def _map_from_labels(labels: np.ndarray, lab_img: LabImage) -> SuperPixelMap:
    n = int(labels.max()) + 1
    mean_lab, centroids, sizes = compute_statistics(labels, lab_img.data, n)
    return SuperPixelMap(
        width=lab_img.width,
        height=lab_img.height,
        labels=labels,
        mean_lab=mean_lab,
        centroids=centroids,
        sizes=sizes,
    )


def sutp_cost(px: tuple[int, int, LabColor], sp: SuperPixel, p: SutpParams) -> float:
    """Assignment cost of one pixel to one super-pixel: color distance plus
    squared distance to the centroid, weighted by lambda1/lambda2."""
    x, y, color = px
    d = color.as_array() - sp.mean_lab.as_array()
    cx, cy = sp.centroid
    return p.lambda1 * float(np.sqrt((d * d).sum())) + p.lambda2 * abs(
        (x - cx) ** 2 + (y - cy) ** 2
    )


def sutp_extract_trace(
    img: LabImage, grid: Grid, p: SutpParams = SutpParams()
) -> tuple[SuperPixelMap, list[SutpIteration]]:
    """Boundary evolution with a per-iteration convergence trace.

    Each iteration recomputes segment statistics, collects the boundary pixels
    and re-tests them in row-major order; moves apply immediately but means
    and centroids stay frozen until the next iteration.  Stops after
    ``max_iters`` or when the previous pass moved at most
    ``stop_frac * boundary`` pixels.
    """
    if (grid.width, grid.height) != (img.width, img.height):
        raise ValueError("grid does not match image dimensions")
    labels = grid.labels()
    lab = np.ascontiguousarray(img.data)
    n = len(grid.cells)
    trace: list[SutpIteration] = []
    moved_prev: int | None = None
    for _ in range(p.max_iters):
        mean_lab, centroids, sizes = compute_statistics(labels, lab, n)
        boundary = _kernels.boundary_pixels(labels)
        b = len(boundary)
        if (b if moved_prev is None else moved_prev) <= p.stop_frac * b:
            break
        moved = _kernels.sutp_scan(
            labels,
            lab,
            mean_lab,
            np.ascontiguousarray(centroids[:, 0]),
            np.ascontiguousarray(centroids[:, 1]),
            sizes,
            boundary,
            p.lambda1,
            p.lambda2,
        )
        trace.append(SutpIteration(boundary_count=b, moved=int(moved)))
        moved_prev = int(moved)
    return _map_from_labels(labels, img), trace


def sutp_extract(img: LabImage, grid: Grid, p: SutpParams = SutpParams()) -> SuperPixelMap:
    return sutp_extract_trace(img, grid, p)[0]


def slic_distance(d_c: float, d_s: float, S: float, m: float) -> float:
    """Combined color/spatial distance: sqrt(d_c^2 + (d_s/S)^2 m^2)."""
    if S <= 0:
        raise ValueError("S must be positive")
    return float(np.sqrt(d_c * d_c + (d_s / S) ** 2 * m * m))


def slic_extract(img: LabImage, p: SlicParams) -> SuperPixelMap:
    """Windowed k-means over (L, a, b, x, y), then isolated-group absorption.

    Centers start on an S-spaced grid (S = sqrt(N/k)); each pixel joins the
    minimum-distance center among those whose 2S x 2S search window contains
    it; centers are updated to 5-vector means each iteration.
    """
    h, w = img.height, img.width
    n_px = h * w
    if p.k > n_px:
        raise ValueError("k cannot exceed the pixel count")
    lab = img.data
    S = float(np.sqrt(n_px / p.k))
    xs = np.arange(S / 2.0, w, S)
    ys = np.arange(S / 2.0, h, S)
    centers = np.empty((len(ys) * len(xs), 5))  # L, a, b, x, y
    i = 0
    for cy in ys:
        for cx in xs:
            px, py = min(int(cx), w - 1), min(int(cy), h - 1)
            centers[i, :3] = lab[py, px]
            centers[i, 3] = cx
            centers[i, 4] = cy
            i += 1

    yy, xx = np.mgrid[0:h, 0:w]
    half = int(np.ceil(S))  # window is 2S x 2S around the center
    labels = np.zeros((h, w), dtype=np.int32)
    for _ in range(p.max_iters):
        best = np.full((h, w), np.inf)
        labels.fill(-1)
        for j in range(len(centers)):
            cl, ca, cb, cx, cy = centers[j]
            x0, x1 = max(int(cx) - half, 0), min(int(cx) + half + 1, w)
            y0, y1 = max(int(cy) - half, 0), min(int(cy) + half + 1, h)
            win = lab[y0:y1, x0:x1]
            dc2 = ((win - centers[j, :3]) ** 2).sum(axis=2)
            ds2 = (xx[y0:y1, x0:x1] - cx) ** 2 + (yy[y0:y1, x0:x1] - cy) ** 2
            d = np.sqrt(dc2 + ds2 / (S * S) * p.m * p.m)
            better = d < best[y0:y1, x0:x1]
            best[y0:y1, x0:x1][better] = d[better]
            labels[y0:y1, x0:x1][better] = j
        if (labels < 0).any():
            # pixels outside every window: assign to nearest center spatially
            miss = labels < 0
            my, mx = np.nonzero(miss)
            d2 = (mx[:, None] - centers[None, :, 3]) ** 2 + (my[:, None] - centers[None, :, 4]) ** 2
            labels[my, mx] = d2.argmin(axis=1)
        # update centers as 5-vector means; empty clusters keep their position
        flat = labels.ravel()
        counts = np.bincount(flat, minlength=len(centers))
        occupied = counts > 0
        for c in range(3):
            s = np.bincount(flat, weights=lab[..., c].ravel(), minlength=len(centers))
            centers[occupied, c] = s[occupied] / counts[occupied]
        sx = np.bincount(flat, weights=xx.ravel(), minlength=len(centers))
        sy = np.bincount(flat, weights=yy.ravel(), minlength=len(centers))
        centers[occupied, 3] = sx[occupied] / counts[occupied]
        centers[occupied, 4] = sy[occupied] / counts[occupied]

    # drop empty clusters so labels are dense before absorption
    counts = np.bincount(labels.ravel(), minlength=len(centers))
    remap = np.cumsum(counts > 0) - 1
    labels = remap[labels].astype(np.int32)
    return absorb_isolated(_map_from_labels(labels, img), img)


def absorb_isolated(sp_map: SuperPixelMap, img: LabImage) -> SuperPixelMap:
    """Reattach disconnected label fragments.

    Every 4-connected component that is not its label's largest component is
    relabelled to the largest super-pixel among its 4-adjacent neighbours.
    Repeats until the map satisfies the connectivity invariant.
    """
    labels = sp_map.labels.copy()
    h, w = labels.shape
    for _ in range(h * w):  # guaranteed to terminate well before this
        comp, n_comp = _kernels.connected_components(labels)
        comp_sizes = np.bincount(comp.ravel(), minlength=n_comp)
        # label of each component and the largest component per label
        flat_c, flat_l = comp.ravel(), labels.ravel()
        order = np.argsort(flat_c, kind="stable")
        starts = np.searchsorted(flat_c[order], np.arange(n_comp))
        first = flat_l[order[starts]]
        n_labels = int(labels.max()) + 1
        keeper = np.full(n_labels, -1, dtype=np.int64)
        for cid in np.argsort(-comp_sizes, kind="stable"):
            lab_id = first[cid]
            if keeper[lab_id] < 0:
                keeper[lab_id] = cid
        stray = np.ones(n_comp, dtype=bool)
        stray[keeper[keeper >= 0]] = False
        if not stray.any():
            break
        sp_sizes = np.bincount(labels.ravel(), minlength=n_labels)
        # adjacency pairs (component, neighbouring super-pixel label)
        hd = comp[:, :-1] != comp[:, 1:]
        vd = comp[:-1, :] != comp[1:, :]
        pairs = [
            np.stack([comp[:, :-1][hd], labels[:, 1:][hd]], axis=1),
            np.stack([comp[:, 1:][hd], labels[:, :-1][hd]], axis=1),
            np.stack([comp[:-1, :][vd], labels[1:, :][vd]], axis=1),
            np.stack([comp[1:, :][vd], labels[:-1, :][vd]], axis=1),
        ]
        adj = np.unique(np.concatenate(pairs), axis=0)
        new_label = {}
        for cid in np.nonzero(stray)[0]:
            nbr = adj[adj[:, 0] == cid, 1]
            nbr = nbr[nbr != first[cid]]
            if len(nbr) == 0:
                continue
            # largest neighbouring super-pixel; ties -> lowest label
            best = nbr[np.lexsort((nbr, -sp_sizes[nbr]))[0]]
            new_label[cid] = int(best)
        if not new_label:
            break
        for cid, lab_id in new_label.items():
            labels[comp == cid] = lab_id
    # labels may no longer be dense if a label lost all pixels
    present = np.bincount(labels.ravel(), minlength=int(labels.max()) + 1) > 0
    remap = np.cumsum(present) - 1
    labels = remap[labels].astype(np.int32)
    return _map_from_labels(labels, img)
