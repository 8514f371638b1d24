"""JIT-compiled inner loops for super-pixel extraction.

Everything here operates on plain arrays so numba can compile it; the typed
wrappers live in :mod:`segcomm.superpixel`.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Ring of 8-neighbour offsets in circular order; odd indices are the
# 4-neighbours (N, E, S, W), even indices the diagonals.
_RING_DX = np.array([-1, 0, 1, 1, 1, 0, -1, -1], dtype=np.int64)
_RING_DY = np.array([-1, -1, -1, 0, 1, 1, 1, 0], dtype=np.int64)


@njit(cache=True)
def _removal_keeps_connected(labels, x, y, lab_id):
    """Local simple-point test: removing (x, y) from its 4-connected segment
    keeps the segment connected iff all same-label 4-neighbours lie in a single
    circular run of same-label cells around the pixel."""
    h, w = labels.shape
    ring = np.zeros(8, dtype=np.bool_)
    for i in range(8):
        nx = x + _RING_DX[i]
        ny = y + _RING_DY[i]
        if 0 <= nx < w and 0 <= ny < h and labels[ny, nx] == lab_id:
            ring[i] = True
    all_true = True
    for i in range(8):
        if not ring[i]:
            all_true = False
            break
    if all_true:
        return True
    # count runs of True that contain a 4-neighbour position (odd index)
    runs_with_edge = 0
    for i in range(8):
        if ring[i] and not ring[(i + 7) % 8]:  # run start
            j = i
            has_edge = False
            while ring[j % 8]:
                if (j % 8) % 2 == 1:
                    has_edge = True
                j += 1
            if has_edge:
                runs_with_edge += 1
    return runs_with_edge <= 1


@njit(cache=True)
def _pixel_cost(lab, mean_lab, cx, cy, x, y, sp, lam1, lam2):
    dl = lab[y, x, 0] - mean_lab[sp, 0]
    da = lab[y, x, 1] - mean_lab[sp, 1]
    db = lab[y, x, 2] - mean_lab[sp, 2]
    color = np.sqrt(dl * dl + da * da + db * db)
    dx = x - cx[sp]
    dy = y - cy[sp]
    return lam1 * color + lam2 * abs(dx * dx + dy * dy)


@njit(cache=True)
def boundary_pixels(labels):
    """Row-major (y, x) list of pixels with a differently-labelled 4-neighbour."""
    h, w = labels.shape
    out = np.empty((h * w, 2), dtype=np.int64)
    n = 0
    for y in range(h):
        for x in range(w):
            lab_id = labels[y, x]
            if (
                (x > 0 and labels[y, x - 1] != lab_id)
                or (x < w - 1 and labels[y, x + 1] != lab_id)
                or (y > 0 and labels[y - 1, x] != lab_id)
                or (y < h - 1 and labels[y + 1, x] != lab_id)
            ):
                out[n, 0] = y
                out[n, 1] = x
                n += 1
    return out[:n]


@njit(cache=True)
def sutp_scan(labels, lab, mean_lab, cx, cy, sizes, boundary, lam1, lam2):
    """One boundary-evolution pass.  Mutates ``labels`` and ``sizes`` in place
    (moves are visible to later pixels of the same scan); segment means and
    centroids stay frozen for the whole pass.  Returns the move count."""
    h, w = labels.shape
    moved = 0
    for b in range(boundary.shape[0]):
        y = boundary[b, 0]
        x = boundary[b, 1]
        cur = labels[y, x]
        best = cur
        best_cost = _pixel_cost(lab, mean_lab, cx, cy, x, y, cur, lam1, lam2)
        is_boundary = False
        for i in range(1, 8, 2):  # 4-neighbours only
            nx = x + _RING_DX[i]
            ny = y + _RING_DY[i]
            if not (0 <= nx < w and 0 <= ny < h):
                continue
            cand = labels[ny, nx]
            if cand == cur:
                continue
            is_boundary = True
            cost = _pixel_cost(lab, mean_lab, cx, cy, x, y, cand, lam1, lam2)
            if cost < best_cost:
                best = cand
                best_cost = cost
            elif cost == best_cost and best != cur and cand < best:
                best = cand
        if not is_boundary or best == cur:
            continue
        if sizes[cur] <= 1:
            continue
        if not _removal_keeps_connected(labels, x, y, cur):
            continue
        labels[y, x] = best
        sizes[cur] -= 1
        sizes[best] += 1
        moved += 1
    return moved


@njit(cache=True)
def connected_components(labels):
    """4-connected components of equal-valued pixels.

    Returns (component map, component count); component ids are dense and
    ordered by first pixel in row-major order.
    """
    h, w = labels.shape
    comp = np.full((h, w), -1, dtype=np.int64)
    stack = np.empty(h * w, dtype=np.int64)
    n = 0
    for sy in range(h):
        for sx in range(w):
            if comp[sy, sx] >= 0:
                continue
            lab_id = labels[sy, sx]
            comp[sy, sx] = n
            top = 0
            stack[top] = sy * w + sx
            top += 1
            while top > 0:
                top -= 1
                p = stack[top]
                py = p // w
                px = p % w
                for i in range(1, 8, 2):
                    nx = px + _RING_DX[i]
                    ny = py + _RING_DY[i]
                    if 0 <= nx < w and 0 <= ny < h and comp[ny, nx] < 0 and labels[ny, nx] == lab_id:
                        comp[ny, nx] = n
                        stack[top] = ny * w + nx
                        top += 1
            n += 1
    return comp, n
