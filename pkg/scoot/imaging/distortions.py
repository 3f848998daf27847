"""Synthetic sketches and the distortion families used to build fixture sets.

The families mirror the defects real synthesis algorithms produce: blur,
noise, contrast change and missing components (dark strokes removed by
thresholding).
"""

from typing import Callable, Dict
import math

import numpy as np
from scipy import ndimage

from ..core.types import GrayImage, InvalidParameterError
from .transforms import threshold_strokes

PAPER_WHITE = 250


def _to_image(values: np.ndarray) -> GrayImage:
    return GrayImage(np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8))


def _ellipse_mask(height: int, width: int, cx: float, cy: float, rx: float, ry: float) -> np.ndarray:
    y, x = np.mgrid[0:height, 0:width]
    return ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1.0


def synthetic_sketch(rng: np.random.Generator, width: int = 128, height: int = 128) -> GrayImage:
    """A face-sketch-like image: paper, soft shading, hatching and contours."""
    if width < 16 or height < 16:
        raise InvalidParameterError(f"synthetic sketches need at least 16x16 pixels, got {width}x{height}")
    canvas = np.full((height, width), float(PAPER_WHITE))
    y, x = np.mgrid[0:height, 0:width]

    # Shading: a head-sized ellipse with soft mid-gray tone
    cx = width * rng.uniform(0.42, 0.58)
    cy = height * rng.uniform(0.45, 0.55)
    rx = width * rng.uniform(0.28, 0.36)
    ry = height * rng.uniform(0.36, 0.44)
    head = _ellipse_mask(height, width, cx, cy, rx, ry)
    canvas[head] = rng.uniform(195, 215)

    # Hatching families (hair, shadows)
    for _ in range(int(rng.integers(2, 4))):
        theta = rng.uniform(0, math.pi)
        period = float(rng.integers(5, 9))
        phase = rng.uniform(0, period)
        thickness = float(rng.integers(1, 3))
        tone = rng.uniform(60, 130)
        region = _ellipse_mask(height, width,
                               width * rng.uniform(0.2, 0.8), height * rng.uniform(0.15, 0.6),
                               width * rng.uniform(0.15, 0.3), height * rng.uniform(0.1, 0.25))
        stripes = np.mod(x * math.cos(theta) + y * math.sin(theta) + phase, period) < thickness
        canvas[region & stripes] = tone

    # Contour strokes
    outline = _ellipse_mask(height, width, cx, cy, rx, ry) & ~_ellipse_mask(height, width, cx, cy, rx - 2, ry - 2)
    canvas[outline] = rng.uniform(30, 60)
    for _ in range(2):
        ex = cx + rx * rng.uniform(-0.5, 0.5)
        ey = cy - ry * rng.uniform(0.0, 0.3)
        feature = _ellipse_mask(height, width, ex, ey, rx * 0.18, ry * 0.08)
        canvas[feature] = rng.uniform(20, 50)

    return _to_image(canvas)


def gaussian_blur(img: GrayImage, sigma: float) -> GrayImage:
    """Gaussian blur with reflected borders."""
    if sigma <= 0:
        return img.copy()
    return _to_image(ndimage.gaussian_filter(img.pixels.astype(np.float64), sigma=sigma, mode="reflect"))


def add_noise(img: GrayImage, sigma: float, rng: np.random.Generator) -> GrayImage:
    """Additive Gaussian noise."""
    noise = rng.normal(0.0, sigma, size=img.pixels.shape)
    return _to_image(img.pixels.astype(np.float64) + noise)


def change_contrast(img: GrayImage, factor: float) -> GrayImage:
    """Scale intensity deviations from the image mean by ``factor``."""
    pixels = img.pixels.astype(np.float64)
    mean = pixels.mean()
    return _to_image(mean + (pixels - mean) * factor)


def remove_components(img: GrayImage, threshold: int) -> GrayImage:
    """Drop every stroke darker than ``threshold``."""
    return threshold_strokes(img, threshold, keep="light")


# Fixture candidates: algorithm name -> distortion, ordered from mildest.
DISTORTION_FAMILIES: Dict[str, Callable[[GrayImage, np.random.Generator], GrayImage]] = {
    "original": lambda img, rng: img.copy(),
    "blur": lambda img, rng: gaussian_blur(img, 1.5),
    "contrast": lambda img, rng: change_contrast(img, 0.45),
    "removal": lambda img, rng: remove_components(img, 140),
    "noise": lambda img, rng: add_noise(img, 40.0, rng),
}
