"""Tone quantization, co-occurrence matrices and their texture statistics.

Coordinates follow image convention: x is the column index growing rightward,
y the row index growing downward. A direction d = (dx, dy) pairs pixel (x, y)
with its partner (x + dx, y + dy). Grades run from 1 to ``levels``.
"""

from typing import Callable, Dict

import numpy as np

from .types import CoMatrix, Direction, GrayImage, InvalidParameterError, QuantizedImage


def quantize(img: GrayImage, levels: int) -> QuantizedImage:
    """Uniformly bin 0..255 into ``levels`` grades: floor(p * levels / 256) + 1."""
    if levels < 2:
        raise InvalidParameterError(f"levels must be at least 2, got {levels}")
    grades = (img.pixels.astype(np.int64) * levels) // 256 + 1
    np.clip(grades, 1, levels, out=grades)
    return QuantizedImage(grades, levels)


def pair_slices(height: int, width: int, d: Direction):
    """Slices selecting every pixel with an in-bounds partner, and those partners.

    Returns ``(origin, partner)`` index tuples for a (height, width) array,
    or ``None`` when the direction leaves no valid pair.
    """
    r0, r1 = max(0, -d.dy), height - max(0, d.dy)
    c0, c1 = max(0, -d.dx), width - max(0, d.dx)
    if r1 <= r0 or c1 <= c0:
        return None
    origin = (slice(r0, r1), slice(c0, c1))
    partner = (slice(r0 + d.dy, r1 + d.dy), slice(c0 + d.dx, c1 + d.dx))
    return origin, partner


def co_occurrence(q: QuantizedImage, d: Direction, symmetric: bool = True) -> CoMatrix:
    """Raw pair counts of grade i at (x, y) and grade j at (x + dx, y + dy).

    Partners outside the image are skipped. With ``symmetric`` the transposed
    cell is incremented as well, which equals accumulating d and -d.
    """
    n = q.levels
    slices = pair_slices(q.height, q.width, d)
    if slices is None:
        return CoMatrix.zeros(n)

    origin, partner = slices
    codes = (q.grades[origin] - 1) * n + (q.grades[partner] - 1)
    counts = np.bincount(codes.ravel(), minlength=n * n).reshape(n, n).astype(np.float64)
    if symmetric:
        counts = counts + counts.T
    return CoMatrix(counts)


def normalize(m: CoMatrix) -> CoMatrix:
    """Scale cells to sum to 1. An all-zero matrix comes back unchanged."""
    total = m.total
    if total == 0:
        return CoMatrix(m.cells, normalized=True)
    return CoMatrix(m.cells / total, normalized=True)


def _grade_gap(levels: int) -> np.ndarray:
    """|i - j| for every grade pair."""
    grades = np.arange(1, levels + 1)
    return np.abs(grades[:, None] - grades[None, :]).astype(np.float64)


def homogeneity(m: CoMatrix) -> float:
    """Sum of m[i][j] / (1 + |i - j|); 1 when all mass sits on the diagonal."""
    return float((m.cells / (1.0 + _grade_gap(m.levels))).sum())


def contrast(m: CoMatrix) -> float:
    """Sum of |i - j|^2 * m[i][j]; 0 for a constant tone."""
    return float((m.cells * _grade_gap(m.levels) ** 2).sum())


def energy(m: CoMatrix) -> float:
    """Sum of m[i][j]^2; 1 when a single cell holds all the mass."""
    return float((m.cells * m.cells).sum())


STATISTICS: Dict[str, Callable[[CoMatrix], float]] = {
    "homogeneity": homogeneity,
    "contrast": contrast,
    "energy": energy,
}
