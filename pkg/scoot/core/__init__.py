"""Core functionality for the Scoot metric."""

from .cache import FeatureCache
from .config import ALL_DIRECTIONS, DEFAULT_DIRECTIONS, ProtocolConfig, ScootConfig
from .glcm import co_occurrence, contrast, energy, homogeneity, normalize, quantize
from .metric import (
    block_co_occurrence, direction_average, feature_vector, image_features,
    scoot_score, split_blocks
)
from .types import (
    CoMatrix, Direction, FeatureVector, GrayImage, QuantizedImage,
    RankedSet, Triplet, ItemResult, MeasureResult, MetaResult,
    ScootError, InvalidParameterError, DegenerateRankingError, DataError,
    ImageNotFoundError, ImageFormatError, ManifestError, ManifestValidationError,
    ReportError
)

__all__ = [
    "FeatureCache",
    "ScootConfig", "ProtocolConfig", "DEFAULT_DIRECTIONS", "ALL_DIRECTIONS",
    "quantize", "co_occurrence", "normalize", "homogeneity", "contrast", "energy",
    "split_blocks", "block_co_occurrence", "feature_vector", "direction_average",
    "image_features", "scoot_score",
    "CoMatrix", "Direction", "FeatureVector", "GrayImage", "QuantizedImage",
    "RankedSet", "Triplet", "ItemResult", "MeasureResult", "MetaResult",
    "ScootError", "InvalidParameterError", "DegenerateRankingError", "DataError",
    "ImageNotFoundError", "ImageFormatError", "ManifestError", "ManifestValidationError",
    "ReportError",
]
