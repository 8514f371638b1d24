"""Initial segment layouts: regular grids and variance-driven quadtree grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from segcomm.color import LabImage


@dataclass(frozen=True)
class GridCell:
    """Pixel bounds, inclusive-exclusive: [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate cell {self}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Grid:
    """An exact tiling of the image rectangle by disjoint cells."""

    width: int
    height: int
    cells: tuple[GridCell, ...]
    kind: str  # "regular" | "quadtree"

    def labels(self) -> np.ndarray:
        """Per-pixel cell index, shape (height, width), int32."""
        out = np.full((self.height, self.width), -1, dtype=np.int32)
        for i, c in enumerate(self.cells):
            out[c.y0 : c.y1, c.x0 : c.x1] = i
        if (out < 0).any():
            raise AssertionError("grid does not tile the image")
        return out


def _split_1d(extent: int, s: int) -> list[tuple[int, int]]:
    """Cut [0, extent) into strips of size s; remainder < s/2 merges into the
    last strip, otherwise it becomes its own strip."""
    n = extent // s
    if n == 0:
        return [(0, extent)]
    rem = extent - n * s
    bounds = [(i * s, (i + 1) * s) for i in range(n)]
    if rem:
        if 2 * rem < s:
            bounds[-1] = (bounds[-1][0], extent)
        else:
            bounds.append((n * s, extent))
    return bounds


def regular_grid(width: int, height: int, s: int) -> Grid:
    """Tile the image with s-by-s cells; edge cells absorb small remainders."""
    if s < 2:
        raise ValueError("cell size s must be at least 2")
    cols = _split_1d(width, s)
    rows = _split_1d(height, s)
    cells = tuple(
        GridCell(x0=c0, y0=r0, x1=c1, y1=r1) for (r0, r1) in rows for (c0, c1) in cols
    )
    return Grid(width=width, height=height, cells=cells, kind="regular")


def _cell_variance(ii: np.ndarray, ii2: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> float:
    """Mean squared Euclidean Lab deviation from the cell mean, via integral
    images (ii = cumulative Lab sums, ii2 = cumulative squared sums)."""
    n = (x1 - x0) * (y1 - y0)
    s = ii[y1, x1] - ii[y0, x1] - ii[y1, x0] + ii[y0, x0]
    s2 = ii2[y1, x1] - ii2[y0, x1] - ii2[y1, x0] + ii2[y0, x0]
    # sum over channels of E[c^2] - E[c]^2
    var = (s2 / n - (s / n) ** 2).sum()
    return float(max(var, 0.0))


def quadtree_grid(
    img: LabImage,
    max_cell: int = 80,
    min_cell: int = 10,
    var_thresh: float = 25.0,
) -> Grid:
    """Recursive 4-way split from max_cell tiles down to min_cell leaves.

    A cell splits while its Lab variance exceeds ``var_thresh`` and its side is
    larger than ``min_cell``.  The split runs on a virtual canvas padded to a
    multiple of ``max_cell``; leaves are clipped to the image bounds.
    """
    if min_cell < 2:
        raise ValueError("min_cell must be at least 2")
    if max_cell < min_cell:
        raise ValueError("max_cell must be >= min_cell")
    ratio = max_cell // min_cell
    if max_cell != min_cell * ratio or ratio & (ratio - 1):
        raise ValueError("max_cell must be min_cell times a power of two")

    w, h = img.width, img.height
    lab = img.data
    ii = np.zeros((h + 1, w + 1, 3))
    ii[1:, 1:] = lab.cumsum(axis=0).cumsum(axis=1)
    ii2 = np.zeros((h + 1, w + 1, 3))
    ii2[1:, 1:] = (lab * lab).cumsum(axis=0).cumsum(axis=1)

    cells: list[GridCell] = []

    def descend(x0: int, y0: int, side: int) -> None:
        cx1, cy1 = min(x0 + side, w), min(y0 + side, h)
        if x0 >= cx1 or y0 >= cy1:
            return  # tile lies entirely in the padding
        if side > min_cell:
            var = _cell_variance(ii, ii2, x0, y0, cx1, cy1)
            if var > var_thresh:
                half = side // 2
                descend(x0, y0, half)
                descend(x0 + half, y0, half)
                descend(x0, y0 + half, half)
                descend(x0 + half, y0 + half, half)
                return
        cells.append(GridCell(x0=x0, y0=y0, x1=cx1, y1=cy1))

    for ty in range(0, h, max_cell):
        for tx in range(0, w, max_cell):
            descend(tx, ty, max_cell)

    return Grid(width=w, height=h, cells=tuple(cells), kind="quadtree")
