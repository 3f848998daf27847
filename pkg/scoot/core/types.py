"""Type definitions for the Scoot metric and its benchmark harness."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import hashlib

import numpy as np


class ScootError(Exception):
    """Base exception for Scoot operations."""
    pass


class InvalidParameterError(ScootError, ValueError):
    """Raised when a parameter or configuration value is out of range."""
    pass


class DegenerateRankingError(ScootError):
    """Raised when a score list has no rank variance (all values tied)."""
    pass


class DataError(ScootError):
    """Base exception for problems with input files and datasets."""
    pass


class ImageNotFoundError(DataError):
    """Raised when an image path does not exist."""
    pass


class ImageFormatError(DataError):
    """Raised when an image file cannot be decoded."""
    pass


class ManifestError(DataError):
    """Raised when a manifest file cannot be parsed.

    ``location`` identifies the offending line or record when known.
    """

    def __init__(self, message: str, path: Optional[str] = None, location: Optional[str] = None):
        self.path = path
        self.location = location
        prefix = ""
        if path:
            prefix = f"{path}: "
        if location:
            prefix += f"{location}: "
        super().__init__(prefix + message)


class ManifestValidationError(ManifestError):
    """Raised when a parsed manifest violates its invariants."""
    pass


class ReportError(DataError):
    """Raised when a report cannot be written or read."""
    pass


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An 8-bit grayscale image.

    ``pixels`` is a (height, width) uint8 array indexed ``pixels[y, x]``,
    with x growing rightward and y growing downward.
    """
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2:
            raise InvalidParameterError(
                f"GrayImage needs a 2-D pixel array, got {pixels.ndim} dimensions")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise InvalidParameterError(
                f"GrayImage dimensions must be positive, got {pixels.shape[1]}x{pixels.shape[0]}")
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise InvalidParameterError("GrayImage intensities must lie in 0..255")
        pixels = np.array(pixels, dtype=np.uint8)
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def size(self) -> Tuple[int, int]:
        """(width, height) of the image."""
        return (self.width, self.height)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> 'GrayImage':
        """Build an image from a list of pixel rows (top row first)."""
        return cls(np.array(rows, dtype=np.int64))

    @classmethod
    def filled(cls, width: int, height: int, value: int) -> 'GrayImage':
        """Constant image of the given size."""
        return cls(np.full((height, width), value, dtype=np.uint8))

    def copy(self) -> 'GrayImage':
        return GrayImage(self.pixels.copy())

    def digest(self) -> str:
        """Content hash over dimensions and pixel bytes."""
        h = hashlib.sha256()
        h.update(f"{self.width}x{self.height}".encode())
        h.update(self.pixels.tobytes())
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __hash__(self) -> int:
        return hash(self.digest())


@dataclass(frozen=True, eq=False)
class QuantizedImage:
    """An image of tone grades in 1..levels, same layout as GrayImage."""
    grades: np.ndarray
    levels: int

    def __post_init__(self):
        if self.levels < 2:
            raise InvalidParameterError(f"levels must be at least 2, got {self.levels}")
        grades = np.asarray(self.grades)
        if grades.ndim != 2 or grades.shape[0] < 1 or grades.shape[1] < 1:
            raise InvalidParameterError(
                f"QuantizedImage needs a non-empty 2-D grade array, got shape {grades.shape}")
        if grades.min() < 1 or grades.max() > self.levels:
            raise InvalidParameterError(
                f"grades must lie in 1..{self.levels}, got {grades.min()}..{grades.max()}")
        grades = np.array(grades, dtype=np.int64)
        grades.setflags(write=False)
        object.__setattr__(self, "grades", grades)

    @property
    def width(self) -> int:
        return int(self.grades.shape[1])

    @property
    def height(self) -> int:
        return int(self.grades.shape[0])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], levels: int) -> 'QuantizedImage':
        return cls(np.array(rows, dtype=np.int64), levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedImage):
            return NotImplemented
        return self.levels == other.levels and np.array_equal(self.grades, other.grades)

    __hash__ = None


@dataclass(frozen=True, order=True)
class Direction:
    """Pixel offset of a co-occurrence partner: (x + dx, y + dy)."""
    dx: int
    dy: int

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise InvalidParameterError("direction (0, 0) has no partner pixel")
        if abs(self.dx) > 1 or abs(self.dy) > 1:
            raise InvalidParameterError(
                f"only unit offsets are supported, got ({self.dx}, {self.dy})")

    def __neg__(self) -> 'Direction':
        return Direction(-self.dx, -self.dy)

    def as_tuple(self) -> Tuple[int, int]:
        return (self.dx, self.dy)


@dataclass(frozen=True, eq=False)
class CoMatrix:
    """Co-occurrence matrix over grades 1..levels.

    ``cells`` is stored 0-based: grade pair (i, j) lives at ``cells[i - 1, j - 1]``.
    """
    cells: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.float64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1] or cells.shape[0] < 2:
            raise InvalidParameterError(f"CoMatrix must be square with >= 2 levels, got {cells.shape}")
        if (cells < 0).any():
            raise InvalidParameterError("CoMatrix cells must be non-negative")
        cells = np.array(cells)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def levels(self) -> int:
        return int(self.cells.shape[0])

    @property
    def total(self) -> float:
        return float(self.cells.sum())

    @property
    def degenerate(self) -> bool:
        """True when no pixel pair contributed to the matrix."""
        return not self.cells.any()

    def at(self, i: int, j: int) -> float:
        """Cell value for grade pair (i, j), grades counted from 1."""
        return float(self.cells[i - 1, j - 1])

    def is_symmetric(self) -> bool:
        return np.array_equal(self.cells, self.cells.T)

    @classmethod
    def zeros(cls, levels: int) -> 'CoMatrix':
        return cls(np.zeros((levels, levels)))

    @classmethod
    def from_cells(cls, levels: int, cells: Dict[Tuple[int, int], float]) -> 'CoMatrix':
        """Build a matrix from a {(i, j): value} map of 1-based grade pairs."""
        arr = np.zeros((levels, levels))
        for (i, j), value in cells.items():
            arr[i - 1, j - 1] = value
        return cls(arr)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Flat block-major, statistic-minor feature vector.

    Entry ``block * len(stats) + s`` holds statistic ``stats[s]`` of block
    ``block`` (blocks in row-major order).
    """
    values: np.ndarray
    stats: Tuple[str, ...]
    grid_k: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        expected = len(self.stats) * self.grid_k * self.grid_k
        if values.size != expected:
            raise InvalidParameterError(
                f"feature vector length {values.size} != {len(self.stats)} x {self.grid_k}^2")
        if not np.isfinite(values).all():
            raise InvalidParameterError("feature vector entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    def block(self, index: int) -> np.ndarray:
        """Statistics of one block, in ``stats`` order."""
        p = len(self.stats)
        return self.values[index * p:(index + 1) * p]

    def distance(self, other: 'FeatureVector') -> float:
        """Euclidean distance between two vectors of the same layout."""
        if self.stats != other.stats or self.grid_k != other.grid_k:
            raise InvalidParameterError("feature vectors have different layouts")
        return float(np.linalg.norm(self.values - other.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return (self.stats == other.stats and self.grid_k == other.grid_k
                and np.array_equal(self.values, other.values))

    __hash__ = None


@dataclass
class RankedSet:
    """A reference sketch with the synthetic sketches competing for it."""
    reference: GrayImage
    candidates: List[Tuple[str, GrayImage]]
    name: str = ""

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise InvalidParameterError(
                f"a ranked set needs at least 2 candidates, got {len(self.candidates)}")
        ids = [algorithm for algorithm, _ in self.candidates]
        duplicates = sorted({a for a in ids if ids.count(a) > 1})
        if duplicates:
            raise InvalidParameterError(f"duplicate algorithm ids: {', '.join(duplicates)}")


@dataclass
class Triplet:
    """A 2AFC judgment: which of s0 / s1 a viewer found closer to the reference."""
    reference: GrayImage
    s0: GrayImage
    s1: GrayImage
    q: int
    name: str = ""

    def __post_init__(self):
        if self.q not in (0, 1):
            raise InvalidParameterError(f"q must be 0 or 1, got {self.q!r}")


@dataclass
class ItemResult:
    """One row of a measure breakdown."""
    measure: str
    item: str
    value: Optional[float]
    status: str = "ok"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class MeasureResult:
    """Aggregate of one measure plus its per-item breakdown."""
    measure: str
    value: Optional[float]
    items: List[ItemResult] = field(default_factory=list)

    @property
    def excluded(self) -> int:
        """Number of items left out of the aggregate."""
        return sum(1 for item in self.items if not item.ok)


@dataclass
class MetaResult:
    """Benchmark aggregates; measures that were not run stay ``None``."""
    mm1_theta: Optional[float] = None
    mm2_theta: Optional[float] = None
    mm3_rate: Optional[float] = None
    jud_rate: Optional[float] = None
    breakdown: List[ItemResult] = field(default_factory=list)

    def __post_init__(self):
        for name, upper in (("mm1_theta", 2.0), ("mm2_theta", 2.0),
                            ("mm3_rate", 1.0), ("jud_rate", 1.0)):
            value = getattr(self, name)
            if value is not None and not (0.0 <= value <= upper):
                raise InvalidParameterError(f"{name} must lie in [0, {upper}], got {value}")

    @classmethod
    def from_measure(cls, result: MeasureResult) -> 'MetaResult':
        """Aggregate of a single measure; its breakdown stays with the measure."""
        return cls(**{MEASURE_FIELDS[result.measure]: result.value})


MEASURE_FIELDS = {
    "mm1": "mm1_theta",
    "mm2": "mm2_theta",
    "mm3": "mm3_rate",
    "judge": "jud_rate",
}
