"""Abstract interface for similarity metrics evaluated by the harness."""

from abc import ABC, abstractmethod

from ..core.types import GrayImage


class SimilarityMetric(ABC):
    """A perceptual similarity metric: higher means closer to the reference.

    Implementations must be safe to call from several worker threads at once.
    """

    name: str = "metric"

    @abstractmethod
    def score(self, candidate: GrayImage, reference: GrayImage) -> float:
        """Score a synthetic sketch against a reference sketch.

        Args:
            candidate: The synthetic sketch being judged
            reference: The reference sketch drawn by an artist

        Returns:
            Similarity; larger values mean more similar
        """
        pass

    def __call__(self, candidate: GrayImage, reference: GrayImage) -> float:
        return self.score(candidate, reference)
