"""Rank-stability statistic theta = 1 - rho (Spearman)."""

from typing import Sequence
import math

import numpy as np
from scipy.stats import rankdata

from ..core.types import DegenerateRankingError, InvalidParameterError


def _doubled_ranks(scores: Sequence[float]) -> list:
    """Average ranks times two, as exact integers."""
    ranks = rankdata(np.asarray(scores, dtype=np.float64), method='average')
    return [int(round(2 * r)) for r in ranks]


def spearman_rho(scores_a: Sequence[float], scores_b: Sequence[float]) -> float:
    """Spearman's rank correlation with average ranks on ties.

    Computed as the Pearson correlation of the rank vectors in integer
    arithmetic, so identical rankings give exactly 1 and reversed rankings
    exactly -1.
    """
    if len(scores_a) != len(scores_b):
        raise InvalidParameterError(
            f"score lists differ in length: {len(scores_a)} vs {len(scores_b)}")
    n = len(scores_a)
    if n < 2:
        raise InvalidParameterError(f"ranking needs at least 2 items, got {n}")
    if not (np.all(np.isfinite(scores_a)) and np.all(np.isfinite(scores_b))):
        raise InvalidParameterError("scores must be finite")

    a = _doubled_ranks(scores_a)
    b = _doubled_ranks(scores_b)
    sum_a, sum_b = sum(a), sum(b)
    sxx = n * sum(x * x for x in a) - sum_a * sum_a
    syy = n * sum(y * y for y in b) - sum_b * sum_b
    if sxx == 0 or syy == 0:
        raise DegenerateRankingError("all scores are tied; rank correlation is undefined")
    sxy = n * sum(x * y for x, y in zip(a, b)) - sum_a * sum_b

    if sxy * sxy == sxx * syy:
        return 1.0 if sxy > 0 else -1.0
    rho = sxy / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, rho))


def spearman_theta(scores_a: Sequence[float], scores_b: Sequence[float]) -> float:
    """theta = 1 - rho, in [0, 2]: 0 for identical rankings, 2 for reversed."""
    return 1.0 - spearman_rho(scores_a, scores_b)
