"""Block-grid feature assembly and the Scoot similarity score."""

from typing import List, Optional, Tuple
import logging

import numpy as np

from ..imaging.transforms import resize_nn
from .config import ScootConfig
from .glcm import pair_slices, quantize
from .types import Direction, FeatureVector, GrayImage, InvalidParameterError, QuantizedImage

logger = logging.getLogger(__name__)


def block_bounds(length: int, k: int) -> List[int]:
    """Block edges floor(i * length / k) for i in 0..k."""
    return [(i * length) // k for i in range(k + 1)]


def _check_grid(width: int, height: int, k: int) -> None:
    if k < 1:
        raise InvalidParameterError(f"grid size must be positive, got {k}")
    if width < k or height < k:
        raise InvalidParameterError(
            f"a {width}x{height} image is too small for a {k}x{k} grid")


def split_blocks(q: QuantizedImage, k: int) -> List[QuantizedImage]:
    """Cut an image into a k x k grid of blocks, row-major."""
    _check_grid(q.width, q.height, k)
    rows = block_bounds(q.height, k)
    cols = block_bounds(q.width, k)
    return [
        QuantizedImage(q.grades[rows[r]:rows[r + 1], cols[c]:cols[c + 1]], q.levels)
        for r in range(k)
        for c in range(k)
    ]


def _block_labels(height: int, width: int, k: int) -> np.ndarray:
    """Row-major block index of every pixel."""
    row_of = np.repeat(np.arange(k), np.diff(block_bounds(height, k)))
    col_of = np.repeat(np.arange(k), np.diff(block_bounds(width, k)))
    return row_of[:, None] * k + col_of[None, :]


def _block_pairs(q: QuantizedImage, k: int, d: Direction) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block index and 0-based grades (i, j) of every pair inside one block."""
    slices = pair_slices(q.height, q.width, d)
    if slices is None:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    origin, partner = slices
    labels = _block_labels(q.height, q.width, k)
    block = labels[origin]
    same = block == labels[partner]
    return (block[same].astype(np.int64),
            q.grades[origin][same].astype(np.int64) - 1,
            q.grades[partner][same].astype(np.int64) - 1)


def block_co_occurrence(q: QuantizedImage, k: int, d: Direction, symmetric: bool = True) -> np.ndarray:
    """Raw co-occurrence counts of every block in one pass.

    Returns a (k*k, levels, levels) array equal to ``co_occurrence`` applied to
    each block of ``split_blocks(q, k)``: pairs straddling a block edge are
    not counted. The array is dense; ``feature_vector`` does not go through it.
    """
    _check_grid(q.width, q.height, k)
    n = q.levels
    block, i, j = _block_pairs(q, k, d)
    counts = np.bincount(block * (n * n) + i * n + j, minlength=k * k * n * n)
    stack = counts.reshape(k * k, n, n).astype(np.float64)
    if symmetric:
        stack = stack + stack.transpose(0, 2, 1)
    return stack


def _block_energy(block: np.ndarray, i: np.ndarray, j: np.ndarray, n: int, blocks: int) -> np.ndarray:
    """Sum of squared symmetric-matrix cells per block, from occupied cells only."""
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    cells, counts = np.unique(block * (n * n) + lo * n + hi, return_counts=True)
    # an off-diagonal count fills two cells, a diagonal count lands twice in one
    diagonal = (cells // n) % n == cells % n
    squares = np.where(diagonal, 4.0, 2.0) * counts.astype(np.float64) ** 2
    return np.bincount(cells // (n * n), weights=squares, minlength=blocks)


def feature_vector(q: QuantizedImage, cfg: ScootConfig, d: Direction) -> FeatureVector:
    """Per-block statistics at one direction, concatenated block-major.

    Blocks without any valid pair contribute 0 for every statistic. Work and
    memory grow with the pixel count, not with k^2 * levels^2.
    """
    _check_grid(q.width, q.height, cfg.grid_k)
    blocks = cfg.grid_k * cfg.grid_k
    block, i, j = _block_pairs(q, cfg.grid_k, d)

    # the symmetric matrix of a block holds twice its pair count
    pairs = np.bincount(block, minlength=blocks).astype(np.float64)
    degenerate = pairs == 0
    if degenerate.any():
        logger.debug("%d of %d blocks have no pixel pairs at %s",
                     int(degenerate.sum()), blocks, d)
    safe = np.where(degenerate, 1.0, pairs)
    gap = np.abs(i - j).astype(np.float64)

    columns = []
    for name in cfg.stats:
        if name == "homogeneity":
            column = np.bincount(block, weights=1.0 / (1.0 + gap), minlength=blocks) / safe
        elif name == "contrast":
            column = np.bincount(block, weights=gap * gap, minlength=blocks) / safe
        else:
            column = _block_energy(block, i, j, q.levels, blocks) / (4.0 * safe * safe)
        columns.append(column)

    values = np.stack(columns, axis=1)
    values[degenerate] = 0.0
    return FeatureVector(values.ravel(), cfg.stats, cfg.grid_k)


def direction_average(q: QuantizedImage, cfg: ScootConfig) -> FeatureVector:
    """Element-wise mean of the feature vectors over ``cfg.directions``."""
    vectors = [feature_vector(q, cfg, d).values for d in cfg.directions]
    mean = np.sum(vectors, axis=0) / len(vectors)
    return FeatureVector(mean, cfg.stats, cfg.grid_k)


def image_features(img: GrayImage, cfg: ScootConfig) -> FeatureVector:
    """Quantize an image and compute its direction-averaged features."""
    _check_grid(img.width, img.height, cfg.grid_k)
    return direction_average(quantize(img, cfg.levels), cfg)


def score_from_features(a: FeatureVector, b: FeatureVector) -> float:
    """1 / (1 + ||a - b||)."""
    return 1.0 / (1.0 + a.distance(b))


def prepare_pair(x: GrayImage, y: GrayImage, cfg: ScootConfig) -> GrayImage:
    """Validate a (synthetic, reference) pair and bring x to y's size."""
    _check_grid(x.width, x.height, cfg.grid_k)
    _check_grid(y.width, y.height, cfg.grid_k)
    if x.size != y.size:
        logger.debug("Resizing %dx%d sketch to reference size %dx%d",
                     x.width, x.height, y.width, y.height)
        x = resize_nn(x, y.width, y.height)
    return x


def scoot_score(x: GrayImage, y: GrayImage, cfg: Optional[ScootConfig] = None) -> float:
    """Scoot similarity of synthetic sketch ``x`` to reference ``y``, in (0, 1].

    If the sizes differ, ``x`` is resized to ``y`` by nearest neighbor first.
    """
    cfg = cfg or ScootConfig()
    x = prepare_pair(x, y, cfg)
    return score_from_features(image_features(x, cfg), image_features(y, cfg))

