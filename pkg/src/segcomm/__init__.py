"""Image segmentation via super-pixels and greedy community detection.

The pipeline: convert an image to CIELAB, over-segment it into super-pixels
(boundary-evolution from a regular or quadtree grid, or SLIC), build a
radius-bounded weighted graph over the super-pixels, maximize modularity with
the fast-greedy merge algorithm, and read the segmentation off the best
dendrogram cut.  A symmetric object-overlap score (with an optional
over-segmentation penalty) evaluates results against ground truth.
"""

from segcomm.color import LabImage, RgbImage, convert_image, rgb_to_lab
from segcomm.community import MergeTrace, Partition, best_partition, fast_greedy, modularity, segment
from segcomm.grid import Grid, GridCell, quadtree_grid, regular_grid
from segcomm.metrics import AomParams, Segmentation, aom, covering, intersection_matrix, overlap, select_reference
from segcomm.pipeline import Config, PipelineResult, run_pipeline
from segcomm.spgraph import GraphParams, SPGraph, build_graph, neighborhood, sp_weight
from segcomm.superpixel import (
    SlicParams,
    SuperPixel,
    SuperPixelMap,
    SutpParams,
    absorb_isolated,
    slic_distance,
    slic_extract,
    sutp_cost,
    sutp_extract,
)

__all__ = [
    "AomParams",
    "Config",
    "Grid",
    "GridCell",
    "GraphParams",
    "LabImage",
    "MergeTrace",
    "Partition",
    "PipelineResult",
    "RgbImage",
    "SPGraph",
    "Segmentation",
    "SlicParams",
    "SuperPixel",
    "SuperPixelMap",
    "SutpParams",
    "absorb_isolated",
    "aom",
    "best_partition",
    "build_graph",
    "convert_image",
    "covering",
    "fast_greedy",
    "intersection_matrix",
    "modularity",
    "neighborhood",
    "overlap",
    "quadtree_grid",
    "regular_grid",
    "rgb_to_lab",
    "run_pipeline",
    "segment",
    "select_reference",
    "slic_distance",
    "slic_extract",
    "sp_weight",
    "sutp_cost",
    "sutp_extract",
]
