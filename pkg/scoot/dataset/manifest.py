"""JSON manifests binding reference sketches to synthetic sketches and judgments.

Ranked manifest::

    {"entries": [{"name": "f1-001", "reference_path": "reference/f1-001.png",
                  "candidates": [{"algorithm": "mrf", "path": "synthetic/mrf/f1-001.png"}]}]}

Triplet manifest::

    {"entries": [{"name": "t1", "reference_path": "...", "s0_path": "...",
                  "s1_path": "...", "q": 0}]}

Relative paths are resolved against the manifest's directory.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import json
import logging
import os

from ..core.types import DataError, ManifestError, ManifestValidationError
from .files import write_atomic

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".pgm", ".bmp")


@dataclass(frozen=True)
class CandidateEntry:
    """One synthetic sketch and the algorithm that produced it."""
    algorithm: str
    path: Path


@dataclass(frozen=True)
class RankedEntry:
    """A reference sketch and its competing synthetic sketches."""
    reference_path: Path
    candidates: Tuple[CandidateEntry, ...]
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or self.reference_path.stem

    @property
    def algorithms(self) -> List[str]:
        return [c.algorithm for c in self.candidates]


@dataclass
class RankedManifest:
    entries: List[RankedEntry] = field(default_factory=list)
    path: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TripletEntry:
    """A recorded 2AFC answer: ``q`` names the sketch the viewer found closer."""
    reference_path: Path
    s0_path: Path
    s1_path: Path
    q: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or self.reference_path.stem


@dataclass
class TripletManifest:
    entries: List[TripletEntry] = field(default_factory=list)
    path: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.entries)


def _read_entries(path: Path) -> List[Any]:
    if not path.is_file():
        raise ManifestError("manifest not found", str(path))
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ManifestError(f"cannot read manifest: {e}", str(path)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(e.msg, str(path), f"line {e.lineno} column {e.colno}") from e

    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise ManifestError('expected an object with an "entries" list', str(path))
    return data["entries"]


class _EntryReader:
    """Typed field access for one manifest record, with located errors."""

    def __init__(self, manifest: Path, index: int, record: Any, check_files: bool):
        self.manifest = manifest
        self.location = f"entry #{index + 1}"
        self.check_files = check_files
        if not isinstance(record, dict):
            self.fail("expected an object")
        self.record = record

    def fail(self, message: str, validation: bool = False):
        error = ManifestValidationError if validation else ManifestError
        raise error(message, str(self.manifest), self.location)

    def string(self, key: str, record: Optional[Dict[str, Any]] = None, required: bool = True) -> str:
        record = self.record if record is None else record
        value = record.get(key)
        if value is None and not required:
            return ""
        if not isinstance(value, str) or not value:
            self.fail(f'"{key}" must be a non-empty string')
        return value

    def image_path(self, key: str, record: Optional[Dict[str, Any]] = None) -> Path:
        path = self.manifest.parent / self.string(key, record)
        if self.check_files and not path.is_file():
            self.fail(f"{key} does not exist: {path}", validation=True)
        return path


def load_ranked_manifest(path: Union[str, Path], check_files: bool = True) -> RankedManifest:
    """Parse and validate a ranked manifest, preserving entry order."""
    path = Path(path)
    entries = []
    for index, record in enumerate(_read_entries(path)):
        reader = _EntryReader(path, index, record, check_files)
        candidates = record.get("candidates")
        if not isinstance(candidates, list):
            reader.fail('"candidates" must be a list')

        parsed = []
        for candidate in candidates:
            if not isinstance(candidate, dict):
                reader.fail("each candidate must be an object")
            parsed.append(CandidateEntry(reader.string("algorithm", candidate),
                                         reader.image_path("path", candidate)))
        algorithms = [c.algorithm for c in parsed]
        duplicates = sorted({a for a in algorithms if algorithms.count(a) > 1})
        if duplicates:
            reader.fail(f"duplicate algorithms: {', '.join(duplicates)}", validation=True)

        entries.append(RankedEntry(reader.image_path("reference_path"), tuple(parsed),
                                   reader.string("name", required=False)))

    logger.info("Loaded ranked manifest %s: %d entries", path, len(entries))
    return RankedManifest(entries, path)


def load_triplet_manifest(path: Union[str, Path], check_files: bool = True) -> TripletManifest:
    """Parse and validate a triplet manifest, preserving entry order."""
    path = Path(path)
    entries = []
    for index, record in enumerate(_read_entries(path)):
        reader = _EntryReader(path, index, record, check_files)
        q = record.get("q")
        if isinstance(q, bool) or q not in (0, 1):
            reader.fail(f"q must be 0 or 1, got {q!r}", validation=True)
        entries.append(TripletEntry(
            reader.image_path("reference_path"),
            reader.image_path("s0_path"),
            reader.image_path("s1_path"),
            int(q),
            reader.string("name", required=False),
        ))

    logger.info("Loaded triplet manifest %s: %d entries", path, len(entries))
    return TripletManifest(entries, path)


def _relative(path: Path, base: Path) -> str:
    try:
        return Path(os.path.relpath(path, base)).as_posix()
    except ValueError:
        return path.as_posix()


def _dump(data: Dict[str, Any], path: Path) -> Path:
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return write_atomic(path, text.encode("utf-8"), error=ManifestError)


def save_ranked_manifest(manifest: RankedManifest, path: Union[str, Path]) -> Path:
    """Write a ranked manifest with paths relative to its directory."""
    path = Path(path)
    base = path.parent
    entries = []
    for entry in manifest.entries:
        record: Dict[str, Any] = {}
        if entry.name:
            record["name"] = entry.name
        record["reference_path"] = _relative(entry.reference_path, base)
        record["candidates"] = [
            {"algorithm": c.algorithm, "path": _relative(c.path, base)} for c in entry.candidates
        ]
        entries.append(record)
    return _dump({"entries": entries}, path)


def save_triplet_manifest(manifest: TripletManifest, path: Union[str, Path]) -> Path:
    """Write a triplet manifest with paths relative to its directory."""
    path = Path(path)
    base = path.parent
    entries = []
    for entry in manifest.entries:
        record: Dict[str, Any] = {}
        if entry.name:
            record["name"] = entry.name
        record["reference_path"] = _relative(entry.reference_path, base)
        record["s0_path"] = _relative(entry.s0_path, base)
        record["s1_path"] = _relative(entry.s1_path, base)
        record["q"] = entry.q
        entries.append(record)
    return _dump({"entries": entries}, path)


def _images_by_stem(directory: Path) -> Dict[str, Path]:
    return {
        p.stem: p for p in sorted(directory.iterdir())
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    }


def index_dataset(root: Union[str, Path]) -> RankedManifest:
    """Build a ranked manifest from a ``reference/`` + ``synthetic/<algorithm>/`` tree.

    Synthetic sketches are matched to references by file stem. Algorithms are
    listed by name; references with no synthetic sketch are left out.
    """
    root = Path(root)
    reference_dir = root / "reference"
    synthetic_dir = root / "synthetic"
    if not reference_dir.is_dir():
        raise DataError(f"dataset has no reference directory: {reference_dir}")

    outputs: Dict[str, Dict[str, Path]] = {}
    if synthetic_dir.is_dir():
        for algorithm_dir in sorted(p for p in synthetic_dir.iterdir() if p.is_dir()):
            outputs[algorithm_dir.name] = _images_by_stem(algorithm_dir)

    entries = []
    for stem, reference in _images_by_stem(reference_dir).items():
        candidates = tuple(
            CandidateEntry(algorithm, images[stem])
            for algorithm, images in outputs.items() if stem in images
        )
        if not candidates:
            logger.warning("No synthetic sketches for %s, skipped", reference)
            continue
        entries.append(RankedEntry(reference, candidates, stem))

    logger.info("Indexed %s: %d references, %d algorithms", root, len(entries), len(outputs))
    return RankedManifest(entries)
