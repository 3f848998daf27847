"""Configuration management for the Scoot metric and benchmark protocol."""

from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Iterable, Tuple
import hashlib
import json

from .types import Direction, InvalidParameterError

# Fixed order in which statistics are concatenated.
STAT_ORDER = ("homogeneity", "contrast", "energy")
STAT_CODES = {"H": "homogeneity", "C": "contrast", "E": "energy"}

DEFAULT_DIRECTIONS: Tuple[Direction, ...] = (
    Direction(0, 1), Direction(-1, 1), Direction(-1, 0), Direction(-1, -1),
)
ALL_DIRECTIONS: Tuple[Direction, ...] = (
    Direction(1, 0), Direction(1, 1), Direction(0, 1), Direction(-1, 1),
    Direction(-1, 0), Direction(-1, -1), Direction(0, -1), Direction(1, -1),
)

ROTATE_CANVASES = ("crop", "expand")


def parse_stats(spec: Any) -> Tuple[str, ...]:
    """Canonicalize a statistics selection.

    Accepts letter codes ("CE", "hec"), full names, or an iterable of either,
    and returns the selected names in the fixed concatenation order.
    """
    tokens: Iterable[str] = [spec] if isinstance(spec, str) else list(spec)
    selected = set()
    for token in tokens:
        if token.lower() in STAT_ORDER:
            selected.add(token.lower())
            continue
        for letter in token:
            name = STAT_CODES.get(letter.upper())
            if name is None:
                raise InvalidParameterError(
                    f"unknown statistic '{token}', expected letters H, C, E or one of {', '.join(STAT_ORDER)}")
            selected.add(name)
    if not selected:
        raise InvalidParameterError("at least one statistic must be selected")
    return tuple(name for name in STAT_ORDER if name in selected)


def stats_code(stats: Iterable[str]) -> str:
    """Letter code of a statistics selection, e.g. ('contrast', 'energy') -> 'CE'."""
    letters = {name: code for code, name in STAT_CODES.items()}
    return "".join(letters[name] for name in STAT_ORDER if name in set(stats))


def direction_from_angle(angle: int) -> Direction:
    """Unit direction for an angle in degrees.

    Angles are measured with the y axis pointing down, so 90 is (0, 1):
    the partner one row below.
    """
    if angle % 45 != 0:
        raise InvalidParameterError(f"direction angles must be multiples of 45, got {angle}")
    steps = (angle // 45) % 8
    offsets = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    dx, dy = offsets[steps]
    return Direction(dx, dy)


def parse_directions(tokens: Iterable[Any]) -> Tuple[Direction, ...]:
    """Directions from CLI tokens: angles in degrees or the word ``all8``."""
    tokens = list(tokens)
    if len(tokens) == 1 and str(tokens[0]).lower() == "all8":
        return ALL_DIRECTIONS
    directions = []
    for token in tokens:
        try:
            angle = int(token)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"invalid direction '{token}', expected an angle or 'all8'") from None
        directions.append(direction_from_angle(angle))
    return tuple(directions)


@dataclass(frozen=True)
class ScootConfig:
    """Parameters of the Scoot metric."""

    # Blocks per image side
    grid_k: int = 4

    # Number of tone grades
    levels: int = 6

    directions: Tuple[Direction, ...] = DEFAULT_DIRECTIONS
    stats: Tuple[str, ...] = ("contrast", "energy")

    def __post_init__(self):
        """Validate configuration parameters after initialization."""
        if not isinstance(self.grid_k, int) or self.grid_k < 1:
            raise InvalidParameterError(f"grid_k must be a positive integer, got {self.grid_k!r}")
        if not isinstance(self.levels, int) or self.levels < 2:
            raise InvalidParameterError(f"levels must be an integer >= 2, got {self.levels!r}")
        if self.levels > 256:
            raise InvalidParameterError(f"levels cannot exceed 256 for 8-bit input, got {self.levels}")

        directions = tuple(
            d if isinstance(d, Direction) else Direction(*d) for d in self.directions)
        if not directions:
            raise InvalidParameterError("at least one direction is required")
        object.__setattr__(self, "directions", directions)
        object.__setattr__(self, "stats", parse_stats(self.stats))

    @property
    def stats_code(self) -> str:
        return stats_code(self.stats)

    @property
    def vector_length(self) -> int:
        return len(self.stats) * self.grid_k * self.grid_k

    @classmethod
    def from_cli_args(cls, args) -> 'ScootConfig':
        """Create config from command line arguments."""
        try:
            kwargs: Dict[str, Any] = {}
            if getattr(args, 'grid_k', None) is not None:
                kwargs['grid_k'] = args.grid_k
            if getattr(args, 'levels', None) is not None:
                kwargs['levels'] = args.levels
            if getattr(args, 'stats', None):
                kwargs['stats'] = args.stats
            if getattr(args, 'directions', None):
                kwargs['directions'] = parse_directions(args.directions)
            return cls(**kwargs)
        except InvalidParameterError as e:
            raise InvalidParameterError(
                f"Invalid configuration from command line arguments: {e}") from e

    def with_overrides(self, **kwargs) -> 'ScootConfig':
        """Create a new config with specific overrides."""
        return replace(self, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grid_k": self.grid_k,
            "levels": self.levels,
            "directions": [list(d.as_tuple()) for d in self.directions],
            "stats": list(self.stats),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScootConfig':
        return cls(
            grid_k=int(data["grid_k"]),
            levels=int(data["levels"]),
            directions=tuple(Direction(int(dx), int(dy)) for dx, dy in data["directions"]),
            stats=tuple(data["stats"]),
        )

    def fingerprint(self) -> str:
        """Stable hash of the configuration."""
        config_str = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(config_str.encode()).hexdigest()


@dataclass(frozen=True)
class ProtocolConfig:
    """Knobs of the meta-measure protocol."""

    # MM1: pixels removed from each reference dimension
    downsize_px: int = 5

    # MM2: counter-clockwise rotation of the reference
    rotate_deg: float = 5.0
    rotate_canvas: str = "crop"

    # MM3: gray threshold separating dark from light strokes
    stroke_threshold: int = 170

    fill: int = 255

    def __post_init__(self):
        if not isinstance(self.downsize_px, int) or self.downsize_px < 0:
            raise InvalidParameterError(
                f"downsize_px must be a non-negative integer, got {self.downsize_px!r}")
        if not -360.0 < float(self.rotate_deg) < 360.0:
            raise InvalidParameterError(f"rotate_deg must lie in (-360, 360), got {self.rotate_deg}")
        if self.rotate_canvas not in ROTATE_CANVASES:
            raise InvalidParameterError(
                f"rotate_canvas must be one of {', '.join(ROTATE_CANVASES)}, got {self.rotate_canvas!r}")
        if not 0 <= self.stroke_threshold <= 255:
            raise InvalidParameterError(
                f"stroke_threshold must lie in 0..255, got {self.stroke_threshold}")
        if not 0 <= self.fill <= 255:
            raise InvalidParameterError(f"fill must lie in 0..255, got {self.fill}")

    @classmethod
    def from_cli_args(cls, args) -> 'ProtocolConfig':
        """Create protocol knobs from command line arguments."""
        kwargs = {}
        for name in ("downsize_px", "rotate_deg", "rotate_canvas", "stroke_threshold"):
            value = getattr(args, name, None)
            if value is not None:
                kwargs[name] = value
        try:
            return cls(**kwargs)
        except InvalidParameterError as e:
            raise InvalidParameterError(
                f"Invalid protocol settings from command line arguments: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}
