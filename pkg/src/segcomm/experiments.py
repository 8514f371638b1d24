"""Batch experiments: radius/threshold sweeps over a ground-truth corpus and
stage-timing benchmarks of the two grid strategies."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from segcomm.community import Partition, best_partition, fast_greedy, segment
from segcomm.dataset_io import SweepRecord, load_ground_truth_dir, load_image
from segcomm.metrics import AomParams, aom, select_reference
from segcomm.pipeline import Config, extract_superpixels, run_pipeline
from segcomm.spgraph import build_graph

DEFAULT_RADII = (1, 2, 3, 4, 5)


def default_static_thresholds() -> list[float]:
    """The static-threshold grid: 0.5 to 40 in steps of 0.5."""
    return [0.5 * k for k in range(1, 81)]


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("SEGCOMM_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_one_image(
    image_path: str,
    gt_dir: str,
    config: Config,
    radii: tuple[int, ...],
    thresholds: list[float],
    include_adaptive: bool,
    done: frozenset,
) -> list[SweepRecord]:
    name = Path(image_path).stem
    img = load_image(image_path)
    gts = load_ground_truth_dir(gt_dir)
    ref = gts[select_reference(gts, AomParams(config.alpha))]

    t0 = time.perf_counter()
    sp_map = extract_superpixels(img, config)
    sp_s = time.perf_counter() - t0

    cells: list[tuple[int, str, float | None]] = []
    for r in radii:
        for t in thresholds:
            cells.append((r, "static", t))
        if include_adaptive:
            cells.append((r, "adaptive", None))

    records = []
    for r, mode, t in cells:
        if (name, r, mode, t) in done:
            continue
        if mode == "adaptive":
            gp = replace(config.graph, radius=r, adaptive=True)
        else:
            gp = replace(config.graph, radius=r, adaptive=False, t0=t)
        t1 = time.perf_counter()
        graph = build_graph(sp_map, gp)
        t2 = time.perf_counter()
        if graph.edges:
            part = best_partition(fast_greedy(graph))
        else:
            part = Partition.singletons(graph.node_count)
        t3 = time.perf_counter()
        seg = segment(sp_map, part)
        score = aom(seg, ref, AomParams(config.alpha))
        records.append(
            SweepRecord(
                image=name,
                radius=r,
                mode=mode,
                t=t,
                superpixels=sp_map.count,
                communities=part.community_count,
                score=score,
                sp_s=sp_s,
                gg_s=t2 - t1,
                fg_s=t3 - t2,
            )
        )
    return records


def run_sweep(
    images: list[tuple[str, str]],  # (image path, ground-truth dir)
    config: Config = Config(),
    radii: tuple[int, ...] = DEFAULT_RADII,
    thresholds: list[float] | None = None,
    include_adaptive: bool = True,
    existing: list[SweepRecord] | None = None,
) -> list[SweepRecord]:
    """One record per (image, radius, threshold-or-adaptive) cell.

    ``existing`` records (from a previous partial run) are kept and their
    cells skipped.  Output is sorted by (image, radius, mode, t) so repeated
    runs merge deterministically.
    """
    thresholds = default_static_thresholds() if thresholds is None else thresholds
    existing = existing or []
    done = frozenset((r.image, r.radius, r.mode, r.t) for r in existing)
    jobs = [
        (str(img), str(gt), config, radii, thresholds, include_adaptive, done)
        for img, gt in images
    ]
    workers = min(max_workers(), len(jobs)) or 1
    records = list(existing)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_sweep_one_image_star, jobs):
                records.extend(part)
    else:
        for job in jobs:
            records.extend(_sweep_one_image(*job))
    records.sort(key=lambda r: (r.image, r.radius, r.mode, r.t if r.t is not None else -1.0))
    return records


def _sweep_one_image_star(job):
    return _sweep_one_image(*job)


def summarize_by_radius(records: list[SweepRecord]) -> dict[int, tuple[float, float]]:
    """Mean and standard deviation of the similarity score per radius."""
    out = {}
    for r in sorted({rec.radius for rec in records}):
        scores = np.array([rec.score for rec in records if rec.radius == r])
        out[r] = (float(scores.mean()), float(scores.std()))
    return out


def threshold_correlation(records: list[SweepRecord]) -> float:
    """Pearson correlation between the static threshold and the score."""
    static = [(rec.t, rec.score) for rec in records if rec.mode == "static"]
    if len(static) < 2:
        raise ValueError("need at least two static-threshold records")
    t = np.array([v for v, _ in static])
    s = np.array([v for _, v in static])
    if t.std() == 0 or s.std() == 0:
        return 0.0
    return float(np.corrcoef(t, s)[0, 1])


def bench(image_path: str | Path, config: Config = Config()) -> dict[str, dict]:
    """Stage timings (sp, gg, fg) for the regular-grid and quadtree-grid
    extractors on one image."""
    img = load_image(image_path)
    out = {}
    for extractor in ("sutp", "qsutp"):
        cfg = replace(config, extractor=extractor)
        res = run_pipeline(img, cfg)
        out[extractor] = {
            "superpixels": res.superpixels.count,
            "communities": res.partition.community_count,
            "timings_s": res.timings,
            "total_s": sum(res.timings.values()),
        }
    return out
