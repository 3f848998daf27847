"""Scoot behind the SimilarityMetric interface, with feature caching."""

from typing import Optional
import logging

from ..core.cache import FeatureCache
from ..core.config import ScootConfig
from ..core.metric import image_features, prepare_pair, score_from_features
from ..core.types import GrayImage
from .interface import SimilarityMetric

logger = logging.getLogger(__name__)


class ScootMetric(SimilarityMetric):
    """Structure co-occurrence texture similarity.

    Reference features are reused across candidates and perturbations through
    the shared FeatureCache. Scores equal ``scoot_score`` bit for bit.
    """

    name = "scoot"

    def __init__(self, config: Optional[ScootConfig] = None, cache: Optional[FeatureCache] = None):
        self.config = config or ScootConfig()
        self.cache = cache if cache is not None else FeatureCache()

    def features(self, img: GrayImage):
        return self.cache.get_or_compute(img, self.config, image_features)

    def score(self, candidate: GrayImage, reference: GrayImage) -> float:
        candidate = prepare_pair(candidate, reference, self.config)
        value = score_from_features(self.features(candidate), self.features(reference))
        logger.debug("Scoot score %.6f (%s)", value, self.config.stats_code)
        return value

    def __repr__(self) -> str:
        return (f"ScootMetric(k={self.config.grid_k}, levels={self.config.levels}, "
                f"stats={self.config.stats_code}, directions={len(self.config.directions)})")
