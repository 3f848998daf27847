"""Deterministic image perturbations used by the meta-measures.

All sampling is nearest-neighbor with half-up rounding so outputs never
contain gray values absent from the input (plus the fill value for rotation).
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from ..core.types import GrayImage, InvalidParameterError

logger = logging.getLogger(__name__)

TRANSFORM_KINDS = ("downsize", "rotate", "light_strokes", "dark_strokes")

# Rec.601 luma weights in thousandths
_LUMA = (299, 587, 114)


@dataclass(frozen=True)
class TransformSpec:
    """A perturbation applied to a reference sketch.

    ``amount`` is pixels for downsize, degrees counter-clockwise for rotate
    and the gray threshold for the stroke filters.
    """
    kind: str
    amount: float

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise InvalidParameterError(
                f"unknown transform '{self.kind}', expected one of {', '.join(TRANSFORM_KINDS)}")
        if self.kind == "downsize" and (self.amount < 1 or self.amount != int(self.amount)):
            raise InvalidParameterError(f"downsize amount must be a whole number >= 1, got {self.amount}")
        if self.kind == "rotate" and not -360 < self.amount < 360:
            raise InvalidParameterError(f"rotation must lie in (-360, 360), got {self.amount}")
        if self.kind in ("light_strokes", "dark_strokes") and not 0 <= self.amount <= 255:
            raise InvalidParameterError(f"stroke threshold must lie in 0..255, got {self.amount}")


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.floor(values + 0.5).astype(np.int64)


def to_gray(rgb: np.ndarray) -> GrayImage:
    """Rec.601 luma of an 8-bit (height, width, 3) array, rounded half-up."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] < 3:
        raise InvalidParameterError(f"expected a (height, width, 3) array, got shape {rgb.shape}")
    channels = rgb[..., :3].astype(np.int64)
    weighted = (channels[..., 0] * _LUMA[0] + channels[..., 1] * _LUMA[1]
                + channels[..., 2] * _LUMA[2])
    return GrayImage(((weighted + 500) // 1000).astype(np.uint8))


def resize_nn(img: GrayImage, width: int, height: int) -> GrayImage:
    """Nearest-neighbor resize; output (x, y) samples source (round(x*W/W'), round(y*H/H'))."""
    if width < 1 or height < 1:
        raise InvalidParameterError(f"target size must be positive, got {width}x{height}")
    if (width, height) == img.size:
        return img.copy()
    cols = _round_half_up(np.arange(width) * img.width / width)
    rows = _round_half_up(np.arange(height) * img.height / height)
    np.clip(cols, 0, img.width - 1, out=cols)
    np.clip(rows, 0, img.height - 1, out=rows)
    return GrayImage(img.pixels[np.ix_(rows, cols)])


def downsize_nn(img: GrayImage, pixels: int) -> GrayImage:
    """Shrink both dimensions by ``pixels`` using nearest-neighbor sampling."""
    if pixels < 0 or pixels >= min(img.width, img.height):
        raise InvalidParameterError(
            f"cannot downsize a {img.width}x{img.height} image by {pixels} pixels")
    return resize_nn(img, img.width - pixels, img.height - pixels)


def rotate(img: GrayImage, degrees_ccw: float, fill: int = 255, expand: bool = False) -> GrayImage:
    """Rotate counter-clockwise about the image center by inverse mapping.

    The canvas keeps the input size (corners cropped) unless ``expand`` is
    set, in which case it grows to the rounded bounding box of the rotated
    frame. Samples falling outside the source take ``fill``.
    """
    theta = math.radians(degrees_ccw)
    cos_t, sin_t = math.cos(theta), math.sin(theta)

    if expand:
        out_w = max(1, int(round(abs(img.width * cos_t) + abs(img.height * sin_t))))
        out_h = max(1, int(round(abs(img.width * sin_t) + abs(img.height * cos_t))))
    else:
        out_w, out_h = img.width, img.height

    src_cx, src_cy = (img.width - 1) / 2.0, (img.height - 1) / 2.0
    out_cx, out_cy = (out_w - 1) / 2.0, (out_h - 1) / 2.0

    # y points down, so a visual CCW turn maps output (u, v) back through
    # [[cos, -sin], [sin, cos]].
    u = np.arange(out_w, dtype=np.float64)[None, :] - out_cx
    v = np.arange(out_h, dtype=np.float64)[:, None] - out_cy
    src_x = _round_half_up(src_cx + u * cos_t - v * sin_t)
    src_y = _round_half_up(src_cy + u * sin_t + v * cos_t)

    inside = (src_x >= 0) & (src_x < img.width) & (src_y >= 0) & (src_y < img.height)
    out = np.full((out_h, out_w), fill, dtype=np.uint8)
    out[inside] = img.pixels[src_y[inside], src_x[inside]]
    return GrayImage(out)


def threshold_strokes(img: GrayImage, threshold: int, keep: str) -> GrayImage:
    """Split a sketch at a gray threshold.

    ``keep="light"`` whitens pixels darker than ``threshold`` (the light-stroke
    residue); ``keep="dark"`` whitens pixels at or above it.
    """
    if keep not in ("light", "dark"):
        raise InvalidParameterError(f"keep must be 'light' or 'dark', got {keep!r}")
    pixels = img.pixels.astype(np.int64)
    if keep == "light":
        whiten = pixels < threshold
    else:
        whiten = pixels >= threshold
    out = img.pixels.copy()
    out[whiten] = 255
    return GrayImage(out)


def apply_transform(img: GrayImage, spec: TransformSpec, fill: int = 255, expand: bool = False) -> GrayImage:
    """Apply a TransformSpec to an image."""
    logger.debug("Applying %s(%s) to %dx%d image", spec.kind, spec.amount, img.width, img.height)
    if spec.kind == "downsize":
        return downsize_nn(img, int(spec.amount))
    if spec.kind == "rotate":
        return rotate(img, spec.amount, fill=fill, expand=expand)
    keep = "light" if spec.kind == "light_strokes" else "dark"
    return threshold_strokes(img, int(spec.amount), keep)
