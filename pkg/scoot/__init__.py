"""
Scoot - structure co-occurrence texture similarity for facial sketches

A library and command line tool that scores synthetic sketches against
reference sketches and benchmarks the metric with rank-stability,
content-capture and 2AFC judgment-agreement measures.
"""

__version__ = "0.1.0"

from .core.config import ProtocolConfig, ScootConfig
from .core.metric import scoot_score
from .core.types import GrayImage, RankedSet, ScootError, Triplet
from .eval.interface import SimilarityMetric
from .eval.scoot_metric import ScootMetric
from .benchmark import ScootBenchmark

__all__ = [
    "ScootConfig",
    "ProtocolConfig",
    "scoot_score",
    "GrayImage",
    "RankedSet",
    "Triplet",
    "ScootError",
    "SimilarityMetric",
    "ScootMetric",
    "ScootBenchmark",
]
