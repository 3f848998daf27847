"""Tests for quantization, co-occurrence matrices and texture statistics."""

import numpy as np
import pytest

from scoot.core.config import ALL_DIRECTIONS
from scoot.core.glcm import (
    co_occurrence, contrast, energy, homogeneity, normalize, quantize
)
from scoot.core.types import (
    CoMatrix, Direction, GrayImage, InvalidParameterError, QuantizedImage
)

LEVEL_COUNTS = (2, 4, 6, 8, 16, 32, 64, 128)


def brute_force_co_occurrence(q: QuantizedImage, d: Direction, symmetric: bool) -> np.ndarray:
    """Pair enumeration over every pixel, straight from the definition."""
    n = q.levels
    counts = np.zeros((n, n), dtype=np.int64)
    grades = q.grades.tolist()
    for y in range(q.height):
        for x in range(q.width):
            px, py = x + d.dx, y + d.dy
            if 0 <= px < q.width and 0 <= py < q.height:
                i, j = grades[y][x], grades[py][px]
                counts[i - 1][j - 1] += 1
                if symmetric:
                    counts[j - 1][i - 1] += 1
    return counts


def random_quantized(rng: np.random.Generator, max_side: int = 32) -> QuantizedImage:
    levels = int(rng.integers(2, 9))
    height, width = rng.integers(1, max_side + 1, size=2)
    return QuantizedImage(rng.integers(1, levels + 1, size=(height, width)), levels)


class TestQuantize:
    """Test uniform tone quantization."""

    def test_all_zero_image(self):
        """Black pixels fall into the lowest grade."""
        q = quantize(GrayImage.filled(4, 3, 0), 6)
        assert (q.grades == 1).all()
        assert (q.width, q.height) == (4, 3)

    def test_all_white_image(self):
        """White pixels fall into the highest grade."""
        q = quantize(GrayImage.filled(4, 3, 255), 6)
        assert (q.grades == 6).all()

    def test_bin_edges(self):
        """Known pixel values map to their grades."""
        q = quantize(GrayImage.from_rows([[0, 42, 43, 128, 255]]), 6)
        assert q.grades.tolist() == [[1, 1, 2, 4, 6]]

    def test_matches_formula_for_every_intensity(self):
        """All 256 intensities agree with floor(p * levels / 256) + 1."""
        img = GrayImage(np.arange(256, dtype=np.uint8).reshape(16, 16))
        for levels in (2, 3, 6, 7, 128, 256):
            q = quantize(img, levels)
            expected = [[min(levels, p * levels // 256 + 1) for p in row] for row in img.pixels.tolist()]
            assert q.grades.tolist() == expected

    def test_invalid_levels(self):
        """Fewer than two grades is rejected."""
        with pytest.raises(InvalidParameterError):
            quantize(GrayImage.filled(2, 2, 0), 1)

    def test_idempotent_on_bin_representatives(self):
        """Re-quantizing the lowest intensity of each bin keeps the grades."""
        rng = np.random.default_rng(3)
        levels = 6
        q = quantize(GrayImage(rng.integers(0, 256, size=(10, 10), dtype=np.uint8)), levels)
        # Lowest intensity of grade g is ceil((g - 1) * 256 / levels)
        representatives = (-(-(q.grades - 1) * 256 // levels)).astype(np.uint8)
        assert quantize(GrayImage(representatives), levels) == q


class TestCoOccurrence:
    """Test directional co-occurrence counting."""

    def test_single_pixel_has_no_pairs(self):
        """A 1x1 image yields the all-zero matrix."""
        q = QuantizedImage.from_rows([[3]], 6)
        for d in ALL_DIRECTIONS:
            m = co_occurrence(q, d)
            assert m.degenerate
            assert m.total == 0

    def test_constant_image_horizontal(self):
        """Constant grade g with d=(1,0) puts (width-1)*height counts on (g,g)."""
        q = QuantizedImage(np.full((5, 7), 4), 6)
        m = co_occurrence(q, Direction(1, 0), symmetric=False)
        assert m.at(4, 4) == (7 - 1) * 5
        assert m.total == (7 - 1) * 5

    def test_vertical_offset_points_down(self):
        """d=(0,1) pairs each pixel with the one a row below."""
        q = QuantizedImage.from_rows([[1, 1], [2, 1]], 2)
        m = co_occurrence(q, Direction(0, 1), symmetric=False)
        assert m.at(1, 2) == 1
        assert m.at(1, 1) == 1
        assert m.at(2, 1) == 0
        assert m.at(2, 2) == 0

    @pytest.mark.parametrize("symmetric", [False, True])
    def test_matches_brute_force_oracle(self, symmetric):
        """200 random images up to 32x32, all eight unit directions."""
        rng = np.random.default_rng(2024)
        for _ in range(200):
            q = random_quantized(rng)
            for d in ALL_DIRECTIONS:
                m = co_occurrence(q, d, symmetric=symmetric)
                assert np.array_equal(m.cells, brute_force_co_occurrence(q, d, symmetric))

    def test_symmetric_equals_both_directions(self):
        """Symmetric accumulation at d equals asymmetric d plus asymmetric -d."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            q = random_quantized(rng, max_side=16)
            for d in ALL_DIRECTIONS:
                both = co_occurrence(q, d, False).cells + co_occurrence(q, -d, False).cells
                m = co_occurrence(q, d, True)
                assert np.array_equal(m.cells, both)
                assert m.is_symmetric()

    def test_opposite_directions_give_same_symmetric_matrix(self):
        """d and -d are indistinguishable once accumulation is symmetric."""
        rng = np.random.default_rng(11)
        q = random_quantized(rng)
        for d in ALL_DIRECTIONS:
            assert np.array_equal(co_occurrence(q, d).cells, co_occurrence(q, -d).cells)

    def test_invalid_direction(self):
        """Zero and non-unit offsets are rejected."""
        with pytest.raises(InvalidParameterError):
            Direction(0, 0)
        with pytest.raises(InvalidParameterError):
            Direction(2, 0)


class TestNormalize:
    """Test co-occurrence normalization."""

    def test_single_cell(self):
        """All mass on one cell normalizes to 1."""
        m = normalize(CoMatrix.from_cells(6, {(1, 1): 4}))
        assert m.at(1, 1) == 1.0
        assert m.normalized

    def test_all_zero_is_degenerate(self):
        """An empty matrix stays all-zero and is flagged degenerate."""
        m = normalize(CoMatrix.zeros(6))
        assert m.degenerate
        assert m.total == 0

    def test_equal_split(self):
        """Two equal counts become 0.5 each."""
        m = normalize(CoMatrix.from_cells(6, {(1, 2): 1, (1, 1): 1}))
        assert m.at(1, 2) == 0.5
        assert m.at(1, 1) == 0.5

    def test_sums_to_one(self):
        """Any image with a valid pair normalizes to total 1."""
        rng = np.random.default_rng(5)
        for _ in range(100):
            q = random_quantized(rng)
            m = co_occurrence(q, Direction(1, 0))
            if not m.degenerate:
                assert normalize(m).total == pytest.approx(1.0, abs=1e-9)


class TestStatistics:
    """Test homogeneity, contrast and energy."""

    def test_homogeneity_examples(self):
        """Diagonal, far off-diagonal and mixed mass."""
        assert homogeneity(CoMatrix.from_cells(6, {(3, 3): 1.0})) == 1.0
        assert homogeneity(CoMatrix.from_cells(6, {(1, 6): 1.0})) == pytest.approx(1 / 6)
        mixed = CoMatrix.from_cells(6, {(1, 1): 0.5, (1, 3): 0.5})
        assert homogeneity(mixed) == pytest.approx(0.5 + 0.5 / 3)

    def test_contrast_examples(self):
        """Contrast is the mass-weighted squared grade gap."""
        assert contrast(CoMatrix.from_cells(6, {(2, 2): 1.0})) == 0.0
        assert contrast(CoMatrix.from_cells(6, {(1, 3): 1.0})) == 4.0
        assert contrast(CoMatrix.from_cells(6, {(2, 2): 0.5, (1, 4): 0.5})) == pytest.approx(4.5)

    def test_energy_examples(self):
        """Energy is the sum of squared cells."""
        assert energy(CoMatrix.from_cells(6, {(5, 2): 1.0})) == 1.0
        assert energy(CoMatrix.from_cells(6, {(1, 1): 0.5, (2, 2): 0.5})) == 0.5
        quarters = {(1, 1): 0.25, (1, 2): 0.25, (2, 1): 0.25, (2, 2): 0.25}
        assert energy(CoMatrix.from_cells(6, quarters)) == 0.25

    def test_ranges_on_random_images(self):
        """0 <= H, E <= 1 and 0 <= C <= (levels - 1)^2."""
        rng = np.random.default_rng(9)
        for _ in range(100):
            q = random_quantized(rng)
            m = normalize(co_occurrence(q, ALL_DIRECTIONS[int(rng.integers(8))]))
            if m.degenerate:
                continue
            assert 0.0 <= homogeneity(m) <= 1.0 + 1e-12
            assert 0.0 <= energy(m) <= 1.0 + 1e-12
            assert 0.0 <= contrast(m) <= (q.levels - 1) ** 2 + 1e-9

    @pytest.mark.parametrize("levels", LEVEL_COUNTS)
    def test_constant_image_exact(self, levels):
        """Constant tone: homogeneity 1, energy 1, contrast 0, exactly."""
        for value in (0, 97, 255):
            q = quantize(GrayImage.filled(64, 64, value), levels)
            for d in ALL_DIRECTIONS:
                m = normalize(co_occurrence(q, d))
                assert homogeneity(m) == 1.0
                assert energy(m) == 1.0
                assert contrast(m) == 0.0
