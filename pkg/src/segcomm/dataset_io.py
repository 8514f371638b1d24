"""Image loading, label-map files, overlays, ground truth and sweep CSVs."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from segcomm.color import RgbImage
from segcomm.metrics import Segmentation

OVERLAY_COLOR = (255, 0, 0)

SWEEP_CSV_HEADER = ["image", "R", "mode", "t", "superpixels", "communities", "I", "sp_s", "gg_s", "fg_s"]


class DatasetIOError(Exception):
    """Base class for dataset I/O failures."""


class ImageNotFoundError(DatasetIOError):
    pass


class ImageDecodeError(DatasetIOError):
    pass


class LabelMapFormatError(DatasetIOError):
    pass


def load_image(path: str | Path) -> RgbImage:
    """Load a PNG or JPEG as 8-bit RGB; alpha is discarded, grayscale is
    replicated to three channels."""
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"no such image: {path}")
    try:
        with Image.open(path) as im:
            rgb = im.convert("RGB")
            data = np.asarray(rgb, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageDecodeError(f"cannot decode {path}: {exc}") from exc
    return RgbImage.from_array(data)


def save_labelmap(seg: Segmentation, path: str | Path) -> None:
    """Write the text label-map format: a "width height region_count" header,
    then one row of space-separated labels per pixel row."""
    lines = [f"{seg.width} {seg.height} {seg.region_count}\n"]
    for row in seg.labels:
        lines.append(" ".join(str(int(v)) for v in row) + "\n")
    Path(path).write_text("".join(lines))


def load_labelmap(path: str | Path) -> Segmentation:
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"no such label map: {path}")
    text = path.read_text().splitlines()
    if not text:
        raise LabelMapFormatError(f"{path}: empty file")
    try:
        width, height, region_count = (int(v) for v in text[0].split())
    except ValueError as exc:
        raise LabelMapFormatError(f"{path}: bad header {text[0]!r}") from exc
    rows = text[1:]
    if len(rows) != height:
        raise LabelMapFormatError(f"{path}: expected {height} rows, found {len(rows)}")
    labels = np.empty((height, width), dtype=np.int32)
    for y, row in enumerate(rows):
        vals = row.split()
        if len(vals) != width:
            raise LabelMapFormatError(f"{path}: row {y} has {len(vals)} values, expected {width}")
        try:
            labels[y] = [int(v) for v in vals]
        except ValueError as exc:
            raise LabelMapFormatError(f"{path}: non-integer label in row {y}") from exc
    if labels.min() < 0:
        raise LabelMapFormatError(f"{path}: negative labels")
    counts = np.bincount(labels.ravel(), minlength=region_count)
    if len(counts) != region_count or (counts == 0).any():
        raise LabelMapFormatError(
            f"{path}: labels are not dense in 0..{region_count - 1}"
        )
    return Segmentation(width=width, height=height, labels=labels, region_count=region_count)


def boundary_mask(seg: Segmentation) -> np.ndarray:
    """Pixels whose 4-neighbourhood crosses a region border."""
    labels = seg.labels
    mask = np.zeros(labels.shape, dtype=bool)
    mask[:, :-1] |= labels[:, :-1] != labels[:, 1:]
    mask[:, 1:] |= labels[:, :-1] != labels[:, 1:]
    mask[:-1, :] |= labels[:-1, :] != labels[1:, :]
    mask[1:, :] |= labels[:-1, :] != labels[1:, :]
    return mask


def render_overlay(img: RgbImage, seg: Segmentation) -> RgbImage:
    """Draw region boundaries over the image in a fixed highlight color."""
    if (img.width, img.height) != (seg.width, seg.height):
        raise ValueError("image and segmentation dimensions differ")
    out = img.data.copy()
    out[boundary_mask(seg)] = OVERLAY_COLOR
    return RgbImage.from_array(out)


def save_image(img: RgbImage, path: str | Path) -> None:
    Image.fromarray(img.data, mode="RGB").save(path)


@dataclass(frozen=True)
class SweepRecord:
    image: str
    radius: int
    mode: str  # "static" | "adaptive"
    t: float | None  # None when adaptive
    superpixels: int
    communities: int
    score: float
    sp_s: float
    gg_s: float
    fg_s: float

    def row(self) -> list[str]:
        return [
            self.image,
            str(self.radius),
            self.mode,
            "adaptive" if self.t is None else f"{self.t:.6f}",
            str(self.superpixels),
            str(self.communities),
            f"{self.score:.6f}",
            f"{self.sp_s:.6f}",
            f"{self.gg_s:.6f}",
            f"{self.fg_s:.6f}",
        ]


def write_sweep_csv(records: list[SweepRecord], path: str | Path) -> None:
    if not records:
        raise ValueError("no sweep records to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for rec in records:
            writer.writerow(rec.row())


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != SWEEP_CSV_HEADER:
            raise DatasetIOError(f"{path}: unexpected CSV header {header}")
        for row in reader:
            out.append(
                SweepRecord(
                    image=row[0],
                    radius=int(row[1]),
                    mode=row[2],
                    t=None if row[3] == "adaptive" else float(row[3]),
                    superpixels=int(row[4]),
                    communities=int(row[5]),
                    score=float(row[6]),
                    sp_s=float(row[7]),
                    gg_s=float(row[8]),
                    fg_s=float(row[9]),
                )
            )
    return out


def load_ground_truth_dir(path: str | Path) -> list[Segmentation]:
    """All label maps in a directory, sorted by file name."""
    path = Path(path)
    if not path.is_dir():
        raise ImageNotFoundError(f"no such ground-truth directory: {path}")
    files = sorted(p for p in path.iterdir() if p.suffix == ".txt")
    if not files:
        raise DatasetIOError(f"{path}: no .txt label maps found")
    return [load_labelmap(p) for p in files]
