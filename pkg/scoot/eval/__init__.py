"""Metric interface and benchmark measures."""

from .interface import SimilarityMetric
from .measures import run_judgment, run_mm1, run_mm2, run_mm3, run_ordered
from .ranking import spearman_rho, spearman_theta
from .scoot_metric import ScootMetric

__all__ = [
    "SimilarityMetric", "ScootMetric",
    "spearman_rho", "spearman_theta",
    "run_mm1", "run_mm2", "run_mm3", "run_judgment", "run_ordered",
]
