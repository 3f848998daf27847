"""Synthetic benchmark sets for smoke tests and desk-scale acceptance runs."""

from pathlib import Path
from typing import Tuple, Union
import logging

import numpy as np

from ..imaging.distortions import DISTORTION_FAMILIES, synthetic_sketch
from .images import save_image
from .manifest import (
    CandidateEntry, RankedEntry, RankedManifest, TripletEntry, TripletManifest,
    save_ranked_manifest, save_triplet_manifest
)

logger = logging.getLogger(__name__)

RANKED_MANIFEST = "ranked.json"
TRIPLET_MANIFEST = "triplets.json"


def make_fixture_set(out_dir: Union[str, Path], count: int = 20, size: Tuple[int, int] = (128, 128),
                     seed: int = 0) -> Tuple[Path, Path]:
    """Write ``count`` reference sketches with one distorted copy per family.

    Layout follows the dataset convention (``reference/`` and
    ``synthetic/<algorithm>/``). The ranked manifest lists every family per
    reference; the triplet manifest pairs the undistorted copy (s0) with one
    distortion (s1, cycling through the families) and records q = 0.

    Returns:
        Paths of the ranked and triplet manifests
    """
    out_dir = Path(out_dir)
    width, height = size
    distortions = [name for name in DISTORTION_FAMILIES if name != "original"]

    ranked, triplets = [], []
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        stem = f"sketch_{index:03d}"
        reference = synthetic_sketch(rng, width, height)
        reference_path = save_image(reference, out_dir / "reference" / f"{stem}.png")

        candidates = []
        for algorithm, distort in DISTORTION_FAMILIES.items():
            path = save_image(distort(reference, rng), out_dir / "synthetic" / algorithm / f"{stem}.png")
            candidates.append(CandidateEntry(algorithm, path))
        ranked.append(RankedEntry(reference_path, tuple(candidates), stem))

        s1 = out_dir / "synthetic" / distortions[index % len(distortions)] / f"{stem}.png"
        triplets.append(TripletEntry(reference_path, out_dir / "synthetic" / "original" / f"{stem}.png",
                                     s1, 0, stem))

    ranked_path = save_ranked_manifest(RankedManifest(ranked), out_dir / RANKED_MANIFEST)
    triplet_path = save_triplet_manifest(TripletManifest(triplets), out_dir / TRIPLET_MANIFEST)
    logger.info("Wrote %d fixture sketches to %s", count, out_dir)
    return ranked_path, triplet_path
