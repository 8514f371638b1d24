"""Super-pixel graph construction and adaptive thresholding."""

import numpy as np
import pytest

from segcomm.color import LabColor, convert_image
from segcomm.grid import regular_grid
from segcomm.spgraph import (
    GraphParams,
    SPGraph,
    border_adjacency,
    build_graph,
    neighborhood,
    sp_weight,
)
from segcomm.superpixel import SuperPixel, SuperPixelMap, compute_statistics, sutp_extract

from conftest import flat_image, texture_image


def _map_with_means(labels: np.ndarray, mean_l) -> SuperPixelMap:
    """Label map with fabricated lightness-only mean descriptors."""
    labels = np.asarray(labels, dtype=np.int32)
    h, w = labels.shape
    n = len(mean_l)
    mean_lab = np.zeros((n, 3))
    mean_lab[:, 0] = mean_l
    sizes = np.bincount(labels.ravel(), minlength=n).astype(np.int64)
    ys, xs = np.mgrid[0:h, 0:w]
    centroids = np.zeros((n, 2))
    centroids[:, 0] = np.bincount(labels.ravel(), weights=xs.ravel(), minlength=n) / sizes
    centroids[:, 1] = np.bincount(labels.ravel(), weights=ys.ravel(), minlength=n) / sizes
    return SuperPixelMap(width=w, height=h, labels=labels, mean_lab=mean_lab,
                         centroids=centroids, sizes=sizes)


def _grid_map(width, height, s=10) -> SuperPixelMap:
    img = flat_image(width, height)
    return sutp_extract(convert_image(img), regular_grid(width, height, s))


def _sp(mean_l: float) -> SuperPixel:
    return SuperPixel(id=0, mean_lab=LabColor(mean_l, 0.0, 0.0), centroid=(0.0, 0.0), size=1)


def test_weight_of_identical_means_is_zero():
    a = SuperPixel(id=0, mean_lab=LabColor(12.0, 3.0, -4.0), centroid=(0, 0), size=1)
    b = SuperPixel(id=1, mean_lab=LabColor(12.0, 3.0, -4.0), centroid=(9, 9), size=5)
    assert sp_weight(a, b) == 0.0


def test_weight_pythagorean():
    a = SuperPixel(id=0, mean_lab=LabColor(0.0, 0.0, 0.0), centroid=(0, 0), size=1)
    b = SuperPixel(id=1, mean_lab=LabColor(3.0, 4.0, 0.0), centroid=(0, 0), size=1)
    assert abs(sp_weight(a, b) - 5.0) < 1e-12


def test_weight_matches_direct_recomputation(rng):
    for _ in range(50):
        va, vb = rng.normal(size=3) * 30, rng.normal(size=3) * 30
        a = SuperPixel(id=0, mean_lab=LabColor(*va), centroid=(0, 0), size=1)
        b = SuperPixel(id=1, mean_lab=LabColor(*vb), centroid=(0, 0), size=1)
        expect = float(np.sqrt(((va - vb) ** 2).sum()))
        assert abs(sp_weight(a, b) - expect) < 1e-12


def test_neighborhood_radius_one_is_border_adjacency():
    sp_map = _grid_map(100, 100)
    adj = border_adjacency(sp_map)
    for i in (0, 37, 99):
        assert neighborhood(sp_map, i, 1) == set(adj[i])


def test_interior_grid_cell_has_four_neighbors():
    sp_map = _grid_map(100, 100)
    # interior cell of the intact 10x10 grid: id = row*10 + col
    assert neighborhood(sp_map, 44, 1) == {34, 43, 45, 54}


def test_neighborhood_grows_to_everything_at_diameter():
    sp_map = _grid_map(40, 40)  # 4x4 grid, diameter 6
    assert neighborhood(sp_map, 0, 6) == set(range(1, 16))


def test_neighborhood_rejects_bad_radius():
    sp_map = _grid_map(20, 20)
    with pytest.raises(ValueError):
        neighborhood(sp_map, 0, 0)


def test_graph_params_validation():
    with pytest.raises(ValueError):
        GraphParams(radius=0)
    with pytest.raises(ValueError):
        GraphParams(t0=0.0)
    with pytest.raises(ValueError):
        GraphParams(t0=50.0, tmax=40.0)
    with pytest.raises(ValueError):
        GraphParams(dt=0.0)
    with pytest.raises(ValueError):
        GraphParams(radius_mode="pixels")


def test_edge_below_initial_threshold():
    labels = np.zeros((4, 8), dtype=np.int32)
    labels[:, 4:] = 1
    g = build_graph(_map_with_means(labels, [0.0, 0.3]), GraphParams(radius=2))
    assert g.edges == ((0, 1, pytest.approx(0.3)),)
    assert g.capped == ()


def test_adaptive_escalation_connects_all_below_reached_threshold():
    # chain 0-1-2; w(0,1)=1.2, w(1,2)=0.3, w(0,2)=1.5
    labels = np.zeros((4, 12), dtype=np.int32)
    labels[:, 4:8] = 1
    labels[:, 8:] = 2
    sp_map = _map_with_means(labels, [0.0, 1.2, 1.5])
    g = build_graph(sp_map, GraphParams(radius=2, adaptive=True))
    got = {(i, j): w for i, j, w in g.edges}
    # node 0 escalates 0.5 -> 1.0 -> 1.5 and takes both candidates
    assert set(got) == {(0, 1), (0, 2), (1, 2)}
    assert abs(got[(0, 1)] - 1.2) < 1e-12
    assert abs(got[(0, 2)] - 1.5) < 1e-12
    assert g.capped == ()


def test_static_threshold_is_plain_filter():
    labels = np.zeros((4, 12), dtype=np.int32)
    labels[:, 4:8] = 1
    labels[:, 8:] = 2
    sp_map = _map_with_means(labels, [0.0, 1.2, 1.5])
    g = build_graph(sp_map, GraphParams(radius=2, t0=0.75, adaptive=False))
    assert [(i, j) for i, j, _ in g.edges] == [(1, 2)]


def test_cap_leaves_node_isolated():
    labels = np.zeros((4, 8), dtype=np.int32)
    labels[:, 4:] = 1
    sp_map = _map_with_means(labels, [0.0, 90.0])
    g = build_graph(sp_map, GraphParams(radius=2, adaptive=True, tmax=40.0))
    assert g.edges == ()
    assert set(g.capped) == {0, 1}


def test_empty_map_rejected():
    sp_map = _map_with_means(np.zeros((2, 2), dtype=np.int32), [0.0])
    bad = SuperPixelMap(width=2, height=2, labels=sp_map.labels,
                        mean_lab=np.zeros((0, 3)), centroids=np.zeros((0, 2)),
                        sizes=np.zeros(0, dtype=np.int64))
    with pytest.raises(ValueError):
        build_graph(bad)


def test_adaptive_guarantees_degree_or_cap(rng):
    img = texture_image(rng, 80, 80)
    sp_map = sutp_extract(convert_image(img), regular_grid(80, 80, 10))
    g = build_graph(sp_map, GraphParams(radius=4, adaptive=True))
    deg = g.degrees()
    isolated = set(np.nonzero(deg == 0)[0].tolist())
    assert isolated == set(g.capped)


def test_edges_monotone_in_radius(rng):
    img = texture_image(rng, 80, 60)
    sp_map = sutp_extract(convert_image(img), regular_grid(80, 60, 10))
    prev = set()
    for r in (1, 2, 3):
        g = build_graph(sp_map, GraphParams(radius=r, t0=8.0, adaptive=False))
        cur = {(i, j) for i, j, _ in g.edges}
        assert prev <= cur
        prev = cur


def test_edge_set_invariant_under_relabeling(rng):
    img = texture_image(rng, 60, 60)
    sp_map = sutp_extract(convert_image(img), regular_grid(60, 60, 10))
    perm = rng.permutation(sp_map.count)
    inv = np.argsort(perm)
    permuted = SuperPixelMap(
        width=sp_map.width, height=sp_map.height,
        labels=perm[sp_map.labels].astype(np.int32),
        mean_lab=sp_map.mean_lab[inv], centroids=sp_map.centroids[inv],
        sizes=sp_map.sizes[inv],
    )
    p = GraphParams(radius=3, adaptive=True)
    base = {(i, j) for i, j, _ in build_graph(sp_map, p).edges}
    mapped = {tuple(sorted((int(perm[i]), int(perm[j])))) for i, j in base}
    got = {(i, j) for i, j, _ in build_graph(permuted, p).edges}
    assert got == mapped


def test_no_self_loops_or_duplicates(rng):
    img = texture_image(rng, 70, 50)
    sp_map = sutp_extract(convert_image(img), regular_grid(70, 50, 10))
    g = build_graph(sp_map)
    seen = set()
    for i, j, w in g.edges:
        assert i < j
        assert w >= 0.0
        assert (i, j) not in seen
        seen.add((i, j))


def test_centroid_mode_builds_a_graph(rng):
    img = texture_image(rng, 60, 60)
    sp_map = sutp_extract(convert_image(img), regular_grid(60, 60, 10))
    g = build_graph(sp_map, GraphParams(radius=2, radius_mode="centroid"))
    assert g.node_count == sp_map.count
    assert g.edges


def test_dump_edges_format():
    g = SPGraph(node_count=3, edges=((0, 1, 0.5), (1, 2, 1.234567891)))
    assert g.dump_edges() == "0 1 0.500000\n1 2 1.234568\n"


def test_adjacency_and_degrees_agree():
    g = SPGraph(node_count=4, edges=((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))
    adj = g.adjacency()
    assert adj == [[1, 2], [0, 2], [1, 0], []]
    assert g.degrees().tolist() == [2, 2, 2, 0]
