"""Command-line front-end for the segmentation pipeline and experiments."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from segcomm import experiments
from segcomm.dataset_io import (
    DatasetIOError,
    load_ground_truth_dir,
    load_image,
    load_labelmap,
    read_sweep_csv,
    render_overlay,
    save_image,
    save_labelmap,
    write_sweep_csv,
)
from segcomm.metrics import AomParams, aom, select_reference
from segcomm.pipeline import Config, extract_superpixels, run_pipeline
from segcomm.spgraph import GraphParams
from segcomm.superpixel import SutpParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--extractor", choices=("sutp", "qsutp", "slic"), default="sutp")
    p.add_argument("--cell-size", type=int, default=10, metavar="S", help="initial grid cell size")
    p.add_argument("--lambda1", type=float, default=1.0, help="color weight")
    p.add_argument("--lambda2", type=float, default=0.1, help="convexity weight")
    p.add_argument("--iters", type=int, default=10, help="max extraction iterations")
    p.add_argument("--stop-frac", type=float, default=0.001)
    p.add_argument("--qt-max-cell", type=int, default=80)
    p.add_argument("--qt-min-cell", type=int, default=10)
    p.add_argument("--qt-var-thresh", type=float, default=25.0)
    p.add_argument("--slic-k", type=int, default=None)
    p.add_argument("--slic-m", type=float, default=10.0)
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--static-t", type=float, default=None, help="fixed threshold (disables the adaptive scheme)")
    p.add_argument("--t0", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.5)
    p.add_argument("--tmax", type=float, default=40.0)
    p.add_argument("--alpha", type=float, default=0.0, help="over-segmentation penalty weight")


def _config_from(args: argparse.Namespace) -> Config:
    if args.static_t is not None:
        graph = GraphParams(radius=args.radius, t0=args.static_t, dt=args.dt, tmax=args.tmax, adaptive=False)
    else:
        graph = GraphParams(radius=args.radius, t0=args.t0, dt=args.dt, tmax=args.tmax, adaptive=True)
    return Config(
        extractor=args.extractor,
        s=args.cell_size,
        sutp=SutpParams(
            lambda1=args.lambda1,
            lambda2=args.lambda2,
            max_iters=args.iters,
            stop_frac=args.stop_frac,
        ),
        quadtree_max_cell=args.qt_max_cell,
        quadtree_min_cell=args.qt_min_cell,
        quadtree_var_thresh=args.qt_var_thresh,
        slic_k=args.slic_k,
        slic_m=args.slic_m,
        graph=graph,
        alpha=args.alpha,
    )


def _cmd_superpixels(args) -> int:
    img = load_image(args.image)
    config = _config_from(args)
    sp_map = extract_superpixels(img, config)
    from segcomm.metrics import Segmentation

    seg = Segmentation.from_labels(sp_map.labels)
    save_labelmap(seg, args.out)
    if args.overlay:
        save_image(render_overlay(img, seg), args.overlay)
    print(f"{sp_map.count} super-pixels -> {args.out}")
    return EXIT_OK


def _cmd_segment(args) -> int:
    img = load_image(args.image)
    config = _config_from(args)
    result = run_pipeline(img, config)
    save_labelmap(result.segmentation, args.out)
    if args.overlay:
        save_image(render_overlay(img, result.segmentation), args.overlay)
    stats = result.stats(config)
    if args.stats:
        Path(args.stats).write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    print(json.dumps(stats, sort_keys=True))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    seg = load_labelmap(args.segmentation)
    gts = load_ground_truth_dir(args.ground_truth)
    params = AomParams(alpha=args.alpha)
    ref_idx = select_reference(gts, params)
    score = aom(seg, gts[ref_idx], params)
    print(f"reference {ref_idx}  I {score:.6f}")
    return EXIT_OK


def _cmd_select_reference(args) -> int:
    gts = load_ground_truth_dir(args.ground_truth)
    files = sorted(p for p in Path(args.ground_truth).iterdir() if p.suffix == ".txt")
    idx = select_reference(gts, AomParams(alpha=args.alpha))
    print(f"{idx} {files[idx]}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    image_dir = Path(args.images)
    gt_root = Path(args.ground_truth)
    paths = sorted(
        p for p in image_dir.iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg")
    )
    pairs = []
    for p in paths:
        gt = gt_root / p.stem
        if gt.is_dir():
            pairs.append((str(p), str(gt)))
    if not pairs:
        raise DatasetIOError(f"no image/ground-truth pairs under {image_dir} and {gt_root}")
    existing = None
    if args.resume and Path(args.out).is_file():
        existing = read_sweep_csv(args.out)
    radii = tuple(int(v) for v in args.radii.split(","))
    thresholds = [args.t_step * k for k in range(1, int(round(args.t_max / args.t_step)) + 1)]
    records = experiments.run_sweep(
        pairs,
        config=_config_from(args),
        radii=radii,
        thresholds=thresholds,
        include_adaptive=not args.no_adaptive,
        existing=existing,
    )
    write_sweep_csv(records, args.out)
    for r, (mean, std) in experiments.summarize_by_radius(records).items():
        print(f"R={r}  mean I {mean:.4f}  std {std:.4f}")
    print(f"{len(records)} records -> {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    result = experiments.bench(args.image, _config_from(args))
    print(f"{'':8s} {'SP':>8s} {'GG':>8s} {'FG':>8s} {'Total':>8s} {'n_sp':>6s} {'comms':>6s}")
    for name, row in result.items():
        t = row["timings_s"]
        print(
            f"{name:8s} {t['sp']:8.3f} {t['gg']:8.3f} {t['fg']:8.3f} "
            f"{row['total_s']:8.3f} {row['superpixels']:6d} {row['communities']:6d}"
        )
    if args.out:
        Path(args.out).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="segcomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superpixels", help="extract super-pixels and write a label map")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    p.add_argument("--overlay")
    _add_pipeline_args(p)
    p.set_defaults(func=_cmd_superpixels)

    p = sub.add_parser("segment", help="run the full pipeline")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    p.add_argument("--overlay")
    p.add_argument("--stats", help="write run statistics as JSON")
    _add_pipeline_args(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("evaluate", help="score a segmentation against ground truth")
    p.add_argument("segmentation")
    p.add_argument("ground_truth", help="directory of ground-truth label maps")
    p.add_argument("--alpha", type=float, default=0.0)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("select-reference", help="pick the reference ground-truth map")
    p.add_argument("ground_truth")
    p.add_argument("--alpha", type=float, default=0.0)
    p.set_defaults(func=_cmd_select_reference)

    p = sub.add_parser("sweep", help="radius/threshold sweep over a corpus")
    p.add_argument("images", help="directory of images")
    p.add_argument("ground_truth", help="root holding one label-map directory per image stem")
    p.add_argument("--out", required=True)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--radii", default="1,2,3,4,5")
    p.add_argument("--t-max", type=float, default=40.0)
    p.add_argument("--t-step", type=float, default=0.5)
    p.add_argument("--no-adaptive", action="store_true")
    _add_pipeline_args(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bench", help="stage timings for sutp vs qsutp")
    p.add_argument("image")
    p.add_argument("--out", help="write results as JSON")
    _add_pipeline_args(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (DatasetIOError, OSError) as exc:
        print(f"segcomm: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"segcomm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"segcomm: internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
