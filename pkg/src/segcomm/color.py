"""Image containers and sRGB -> CIELAB conversion (D65, 2 degree observer)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# sRGB (IEC 61966-2-1) linear RGB -> XYZ, D65 white point.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# D65 reference white, computed from the matrix itself so that
# (255,255,255) lands exactly on L=100, a=0, b=0.
_WHITE = _RGB_TO_XYZ.sum(axis=1)

_DELTA = 6.0 / 29.0


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB raster. ``data`` has shape (height, width, 3), dtype uint8."""

    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be at least 1x1")
        if self.data.shape != (self.height, self.width, 3):
            raise ValueError(
                f"data shape {self.data.shape} does not match "
                f"{self.height}x{self.width}x3"
            )
        if self.data.dtype != np.uint8:
            raise ValueError("RgbImage data must be uint8")

    @classmethod
    def from_array(cls, data: np.ndarray) -> "RgbImage":
        data = np.ascontiguousarray(data, dtype=np.uint8)
        h, w = data.shape[:2]
        return cls(width=w, height=h, data=data)

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        r, g, b = self.data[y, x]
        return int(r), int(g), int(b)


@dataclass(frozen=True)
class LabColor:
    """A single CIELAB color. L in [0, 100]; a, b unbounded in principle."""

    L: float
    a: float
    b: float

    def as_array(self) -> np.ndarray:
        return np.array([self.L, self.a, self.b])


@dataclass(frozen=True)
class LabImage:
    """Per-pixel CIELAB values, shape (height, width, 3), dtype float64."""

    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.height, self.width, 3):
            raise ValueError("LabImage data shape mismatch")
        if self.data.dtype != np.float64:
            raise ValueError("LabImage data must be float64")

    def pixel(self, x: int, y: int) -> LabColor:
        L, a, b = self.data[y, x]
        return LabColor(float(L), float(a), float(b))


def _srgb_decode(c: np.ndarray) -> np.ndarray:
    """Inverse sRGB companding: 0..1 encoded values to linear light."""
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _f(t: np.ndarray) -> np.ndarray:
    cube = _DELTA**3
    return np.where(t > cube, np.cbrt(t), t / (3.0 * _DELTA**2) + 4.0 / 29.0)


def _lab_from_rgb_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorized conversion of a (..., 3) uint8 array to CIELAB float64."""
    linear = _srgb_decode(rgb.astype(np.float64) / 255.0)
    xyz = linear @ _RGB_TO_XYZ.T
    fxyz = _f(xyz / _WHITE)
    fx, fy, fz = fxyz[..., 0], fxyz[..., 1], fxyz[..., 2]
    out = np.empty(rgb.shape[:-1] + (3,), dtype=np.float64)
    out[..., 0] = 116.0 * fy - 16.0
    out[..., 1] = 500.0 * (fx - fy)
    out[..., 2] = 200.0 * (fy - fz)
    return out


def rgb_to_lab(c: tuple[int, int, int]) -> LabColor:
    """Convert one 8-bit sRGB triple to CIELAB."""
    r, g, b = c
    for v in (r, g, b):
        if not 0 <= v <= 255:
            raise ValueError("RGB components must be in 0..255")
    lab = _lab_from_rgb_array(np.array([r, g, b], dtype=np.uint8))
    return LabColor(float(lab[0]), float(lab[1]), float(lab[2]))


def convert_image(img: RgbImage) -> LabImage:
    """Element-wise sRGB -> CIELAB; dimensions preserved."""
    return LabImage(width=img.width, height=img.height, data=_lab_from_rgb_array(img.data))
