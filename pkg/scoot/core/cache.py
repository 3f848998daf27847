"""In-memory cache of direction-averaged feature vectors.

Benchmarks score every candidate against the same reference many times
(original, downsized and rotated references, several configs in a sweep), so
features are cached by image content and configuration.
"""
from collections import OrderedDict
from typing import Any, Callable, Dict, Optional, Tuple
import hashlib
import logging
import threading

from .config import ScootConfig
from .types import FeatureVector, GrayImage

logger = logging.getLogger(__name__)


class FeatureCache:
    """Thread-safe LRU cache keyed by (image digest, config fingerprint).

    Features:
    - Content addressing: equal pixels share an entry regardless of origin
    - Bounded size with least-recently-used eviction
    - Hit/miss accounting for diagnostics
    """

    DEFAULT_MAX_ENTRIES = 4096

    def __init__(self, max_entries: int = DEFAULT_MAX_ENTRIES):
        if max_entries < 1:
            raise ValueError(f"max_entries must be positive, got {max_entries}")
        self.max_entries = max_entries
        self._entries: "OrderedDict[str, FeatureVector]" = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def _generate_key(self, img: GrayImage, config: ScootConfig) -> str:
        key_string = "|".join(["features", img.digest(), config.fingerprint()])
        return hashlib.sha256(key_string.encode()).hexdigest()[:32]

    def get(self, img: GrayImage, config: ScootConfig) -> Optional[FeatureVector]:
        key = self._generate_key(img, config)
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                self._misses += 1
                return None
            self._entries.move_to_end(key)
            self._hits += 1
            return entry

    def put(self, img: GrayImage, config: ScootConfig, features: FeatureVector) -> None:
        key = self._generate_key(img, config)
        with self._lock:
            self._entries[key] = features
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                evicted, _ = self._entries.popitem(last=False)
                logger.debug("Evicted feature cache entry %s", evicted)

    def get_or_compute(
        self,
        img: GrayImage,
        config: ScootConfig,
        compute: Callable[[GrayImage, ScootConfig], FeatureVector],
    ) -> FeatureVector:
        """Cached features, computing them outside the lock on a miss."""
        features = self.get(img, config)
        if features is None:
            features = compute(img, config)
            self.put(img, config, features)
        return features

    def clear_all(self) -> None:
        with self._lock:
            self._entries.clear()
            self._hits = 0
            self._misses = 0
        logger.debug("Cleared feature cache")

    def get_stats(self) -> Dict[str, Any]:
        """Entry count and hit rate."""
        with self._lock:
            total = self._hits + self._misses
            return {
                "entries": len(self._entries),
                "max_entries": self.max_entries,
                "cache_hits": self._hits,
                "cache_misses": self._misses,
                "cache_hit_rate": (self._hits / total) if total else 0.0,
            }
