"""Regular and quadtree grid layouts."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import quadtree_leaves_reference
from segcomm.color import convert_image
from segcomm.grid import Grid, GridCell, quadtree_grid, regular_grid

from conftest import flat_image, texture_image, two_color_image


def test_exact_tiling_100():
    g = regular_grid(100, 100, 10)
    assert len(g.cells) == 100
    assert all(c.width == 10 and c.height == 10 for c in g.cells)


def test_single_cell_when_image_equals_cell():
    g = regular_grid(10, 10, 10)
    assert len(g.cells) == 1
    assert g.cells[0] == GridCell(x0=0, y0=0, x1=10, y1=10)


def test_small_remainder_merges_into_last_column():
    g = regular_grid(104, 100, 10)
    assert len(g.cells) == 100
    widths = sorted({c.width for c in g.cells})
    assert widths == [10, 14]
    last_col = [c for c in g.cells if c.x1 == 104]
    assert all(c.width == 14 for c in last_col)


def test_large_remainder_becomes_own_column():
    g = regular_grid(105, 100, 10)
    # remainder 5 is not < s/2, so it forms an extra 5-wide column
    assert len(g.cells) == 110
    assert any(c.width == 5 for c in g.cells)


def test_dimension_smaller_than_cell_degenerates():
    g = regular_grid(7, 30, 10)
    assert all(c.width == 7 for c in g.cells)


def test_cell_size_validation():
    with pytest.raises(ValueError):
        regular_grid(10, 10, 1)


@settings(deadline=None, max_examples=60)
@given(
    st.integers(2, 60),
    st.integers(2, 60),
    st.integers(2, 20),
)
def test_regular_grid_tiles_exactly(w, h, s):
    g = regular_grid(w, h, s)
    labels = g.labels()
    assert labels.shape == (h, w)
    assert sum(c.area for c in g.cells) == w * h
    # labels() raises if any pixel is uncovered; overlap would break the sum
    assert labels.min() >= 0


def test_grid_labels_row_major_disjoint():
    g = regular_grid(20, 20, 10)
    labels = g.labels()
    for i, c in enumerate(g.cells):
        block = labels[c.y0 : c.y1, c.x0 : c.x1]
        assert (block == i).all()


def test_quadtree_uniform_image_keeps_max_cells():
    img = convert_image(flat_image(160, 160))
    g = quadtree_grid(img, max_cell=80, min_cell=10, var_thresh=25.0)
    assert g.kind == "quadtree"
    assert len(g.cells) == 4
    assert all(c.width == 80 and c.height == 80 for c in g.cells)


def test_quadtree_boundary_on_tile_edge_never_splits():
    img = convert_image(two_color_image(160, 80, split_x=80))
    g = quadtree_grid(img, max_cell=80, min_cell=10, var_thresh=25.0)
    assert all(c.width == 80 and c.height == 80 for c in g.cells)


def test_quadtree_splits_only_crossed_tiles():
    img = convert_image(two_color_image(160, 80, split_x=25))
    g = quadtree_grid(img, max_cell=80, min_cell=10, var_thresh=25.0)
    # the right tile is flat and stays whole
    assert GridCell(x0=80, y0=0, x1=160, y1=80) in g.cells
    # every leaf is either color-pure or already at min_cell on the edge
    straddling = [c for c in g.cells if c.x0 < 25 < c.x1]
    assert straddling
    assert all(c.width == 10 for c in straddling)


def test_quadtree_matches_split_replay(rng):
    img = convert_image(texture_image(rng, 96, 64, block=16, jitter=4))
    g = quadtree_grid(img, max_cell=32, min_cell=8, var_thresh=25.0)
    expect = quadtree_leaves_reference(img.data, 32, 8, 25.0)
    got = [(c.x0, c.y0, c.x1, c.y1) for c in g.cells]
    assert sorted(got) == sorted(expect)


def test_quadtree_zero_threshold_descends_where_color_varies(rng):
    img = convert_image(texture_image(rng, 64, 64, block=4, jitter=8))
    g = quadtree_grid(img, max_cell=40, min_cell=10, var_thresh=0.0)
    assert all(c.width <= 10 and c.height <= 10 for c in g.cells)


def test_quadtree_count_bounded_by_regular(rng):
    img = convert_image(texture_image(rng, 120, 80, block=16))
    g = quadtree_grid(img, max_cell=40, min_cell=10, var_thresh=25.0)
    reg = regular_grid(120, 80, 10)
    assert len(g.cells) <= len(reg.cells)


def test_quadtree_tiles_non_power_of_two_dimensions(rng):
    img = convert_image(texture_image(rng, 130, 70, block=8))
    g = quadtree_grid(img, max_cell=80, min_cell=10, var_thresh=25.0)
    labels = g.labels()
    assert labels.shape == (70, 130)
    assert sum(c.area for c in g.cells) == 130 * 70


def test_quadtree_parameter_validation():
    img = convert_image(flat_image(32, 32))
    with pytest.raises(ValueError):
        quadtree_grid(img, max_cell=80, min_cell=1)
    with pytest.raises(ValueError):
        quadtree_grid(img, max_cell=8, min_cell=10)
    with pytest.raises(ValueError):
        quadtree_grid(img, max_cell=30, min_cell=10)  # 3x is not a power of two


def test_degenerate_cell_rejected():
    with pytest.raises(ValueError):
        GridCell(x0=5, y0=0, x1=5, y1=10)


def test_grid_labels_detects_gaps():
    g = Grid(width=4, height=4, cells=(GridCell(x0=0, y0=0, x1=2, y1=4),), kind="regular")
    with pytest.raises(AssertionError):
        g.labels()
