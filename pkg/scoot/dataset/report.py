"""Score reports: deterministic CSV (per-item rows) and JSON (full structure)."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import csv
import io
import json
import logging

from ..core.types import InvalidParameterError, ItemResult, MetaResult, ReportError
from .files import write_atomic

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("csv", "json")
ROW_FIELDS = ("measure", "item", "value", "status", "detail")
AGGREGATE_FIELDS = ("mm1_theta", "mm2_theta", "mm3_rate", "jud_rate")


def format_float(value: float) -> str:
    """Six significant digits, the precision used everywhere in reports."""
    return f"{value:.6g}"


def _pinned(value: Optional[float]) -> Optional[float]:
    return None if value is None else float(format_float(value))


def _pin_config(value: Any) -> Any:
    if isinstance(value, float):
        return _pinned(value)
    if isinstance(value, dict):
        return {k: _pin_config(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_pin_config(v) for v in value]
    return value


@dataclass
class ScoreReport:
    """Everything a benchmark run produced, plus what it was run with."""
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    rows: List[ItemResult] = field(default_factory=list)
    aggregate: MetaResult = field(default_factory=MetaResult)
    tool_version: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready structure with floats pinned to six significant digits."""
        aggregate: Dict[str, Any] = {name: _pinned(getattr(self.aggregate, name)) for name in AGGREGATE_FIELDS}
        aggregate["breakdown"] = [_row_to_dict(row) for row in self.aggregate.breakdown]
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "config": _pin_config(self.config),
            "aggregate": aggregate,
            "rows": [_row_to_dict(row) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScoreReport':
        aggregate = data.get("aggregate") or {}
        return cls(
            command=data.get("command", ""),
            config=data.get("config") or {},
            rows=[_row_from_dict(row) for row in data.get("rows", [])],
            aggregate=MetaResult(
                breakdown=[_row_from_dict(row) for row in aggregate.get("breakdown", [])],
                **{name: aggregate.get(name) for name in AGGREGATE_FIELDS},
            ),
            tool_version=data.get("tool_version", ""),
        )


def _row_to_dict(row: ItemResult) -> Dict[str, Any]:
    return {
        "measure": row.measure,
        "item": row.item,
        "value": _pinned(row.value),
        "status": row.status,
        "detail": row.detail,
    }


def _row_from_dict(data: Dict[str, Any]) -> ItemResult:
    value = data.get("value")
    return ItemResult(
        measure=data["measure"],
        item=data["item"],
        value=None if value is None else float(value),
        status=data.get("status", "ok"),
        detail=data.get("detail", ""),
    )


def _render_csv(report: ScoreReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in report.rows:
        value = "" if row.value is None else format_float(row.value)
        writer.writerow([row.measure, row.item, value, row.status, row.detail])
    return buffer.getvalue()


def render_report(report: ScoreReport, format: str) -> str:
    """Serialize a report; identical reports always give identical text."""
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if format == "csv":
        return _render_csv(report)
    raise InvalidParameterError(f"unknown report format '{format}', expected csv or json")


def write_report(report: ScoreReport, path: Union[str, Path], format: str = "json") -> Path:
    """Write a report atomically; a failed write leaves no partial file."""
    text = render_report(report, format)
    path = write_atomic(path, text.encode("utf-8"), error=ReportError)
    logger.info("Report written to %s (%s, %d rows)", path, format, len(report.rows))
    return path


def _parse_csv(text: str, path: Path) -> ScoreReport:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != ROW_FIELDS:
        raise ReportError(f"{path}: unexpected CSV header {reader.fieldnames}")
    rows = []
    for record in reader:
        rows.append(ItemResult(
            measure=record["measure"],
            item=record["item"],
            value=float(record["value"]) if record["value"] else None,
            status=record["status"],
            detail=record["detail"],
        ))
    return ScoreReport(command="", rows=rows)


def load_report(path: Union[str, Path]) -> ScoreReport:
    """Read a report back. CSV files only carry the per-item rows."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportError(f"cannot read report {path}: {e}") from e

    try:
        if path.suffix.lower() == ".csv":
            return _parse_csv(text, path)
        return ScoreReport.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ReportError(f"cannot parse report {path}: {e}") from e
