"""Tests for the Spearman-based rank-stability statistic."""

import numpy as np
import pytest

from scoot.core.types import DegenerateRankingError, InvalidParameterError
from scoot.eval.ranking import spearman_rho, spearman_theta


def average_ranks(values):
    """1-based ranks, ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for m in range(i, j + 1):
            ranks[order[m]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def oracle_rho(a, b):
    """Pearson correlation of average ranks, in plain Python."""
    ra, rb = average_ranks(a), average_ranks(b)
    n = len(a)
    ma, mb = sum(ra) / n, sum(rb) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    va = sum((x - ma) ** 2 for x in ra)
    vb = sum((y - mb) ** 2 for y in rb)
    return cov / (va * vb) ** 0.5


class TestSpearmanTheta:
    """Test theta = 1 - rho."""

    def test_same_order(self):
        """Same ranking gives 0."""
        assert spearman_theta([1, 2, 3], [10, 20, 30]) == 0.0

    def test_reversed_order(self):
        """Reversed ranking gives 2."""
        assert spearman_theta([1, 2, 3], [3, 2, 1]) == 2.0

    def test_one_swap(self):
        """One adjacent swap among four items gives 0.2."""
        assert spearman_theta([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.2, abs=1e-12)

    def test_self_comparison(self):
        """Any list with distinct values is perfectly stable against itself."""
        rng = np.random.default_rng(1)
        for n in range(2, 30):
            values = rng.normal(size=n).tolist()
            assert spearman_theta(values, values) == 0.0

    def test_exact_extremes_with_ties(self):
        """Ties do not spoil the exact 0 and 2."""
        a = [1.0, 2.0, 2.0, 3.0, 5.0]
        assert spearman_theta(a, a) == 0.0
        assert spearman_theta(a, [-v for v in a]) == 2.0

    def test_matches_oracle(self):
        """1000 random lists of length 2..20 with ties."""
        rng = np.random.default_rng(2)
        checked = 0
        while checked < 1000:
            n = int(rng.integers(2, 21))
            a = rng.integers(0, 6, size=n).tolist()
            b = rng.integers(0, 6, size=n).tolist()
            if len(set(a)) < 2 or len(set(b)) < 2:
                continue
            assert spearman_rho(a, b) == pytest.approx(oracle_rho(a, b), abs=1e-12)
            assert 0.0 <= spearman_theta(a, b) <= 2.0
            checked += 1

    def test_invariant_under_increasing_transform(self):
        """Strictly increasing maps preserve ranks, hence theta."""
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = rng.uniform(0.01, 1, size=8)
            b = rng.uniform(0.01, 1, size=8)
            transformed = np.exp(3 * a) + np.log(a)
            assert np.array_equal(np.argsort(transformed), np.argsort(a))
            assert spearman_theta(transformed.tolist(), b.tolist()) == spearman_theta(a.tolist(), b.tolist())

    def test_length_mismatch(self):
        """Lists must pair up."""
        with pytest.raises(InvalidParameterError):
            spearman_theta([1, 2, 3], [1, 2])

    def test_too_short(self):
        """A single item has no ranking."""
        with pytest.raises(InvalidParameterError):
            spearman_theta([1], [1])

    def test_all_tied(self):
        """Zero rank variance is a degenerate ranking."""
        with pytest.raises(DegenerateRankingError):
            spearman_theta([0.5, 0.5, 0.5], [1, 2, 3])
        with pytest.raises(DegenerateRankingError):
            spearman_theta([1, 2, 3], [7, 7, 7])
