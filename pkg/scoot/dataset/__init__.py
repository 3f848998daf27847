"""Dataset ingestion, manifests and reports."""

from .fixtures import make_fixture_set
from .images import load_image, save_image
from .manifest import (
    CandidateEntry, RankedEntry, RankedManifest, TripletEntry, TripletManifest,
    index_dataset, load_ranked_manifest, load_triplet_manifest,
    save_ranked_manifest, save_triplet_manifest
)
from .report import ScoreReport, format_float, load_report, render_report, write_report

__all__ = [
    "make_fixture_set",
    "load_image", "save_image",
    "CandidateEntry", "RankedEntry", "RankedManifest", "TripletEntry", "TripletManifest",
    "index_dataset", "load_ranked_manifest", "load_triplet_manifest",
    "save_ranked_manifest", "save_triplet_manifest",
    "ScoreReport", "format_float", "load_report", "render_report", "write_report",
]
