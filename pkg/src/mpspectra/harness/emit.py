"""CSV and JSON writers for experiment results."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .results import CSV_COLUMNS, RESULT_TYPES


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def render_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    rows = result.metrics() if result is not None else []
    for row in rows:
        writer.writerow([format_value(row[col]) for col in CSV_COLUMNS])
    return buf.getvalue()


def render_json(result) -> str:
    """JSON mirror: the CSV metric rows under ``metrics`` plus the structured result."""
    metrics = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()} for row in result.metrics()]
    doc = {
        "experiment": result.info.experiment,
        "metrics": metrics,
        "result": result.to_json(),
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def emit(result, path, format: str = "csv") -> None:
    """Write ``result`` as CSV (one row per metric) or JSON.

    ``result=None`` writes a header-only CSV.  I/O failures surface as OSError
    naming the path.
    """
    fmt = format.lower()
    if fmt == "csv":
        text = render_csv(result)
    elif fmt == "json":
        if result is None:
            raise ValueError("cannot emit an empty result as JSON")
        text = render_json(result)
    else:
        raise ValueError(f"unknown output format {format!r}")
    target = Path(path)
    try:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc


def load_json_result(path):
    """Inverse of ``emit(..., format="json")``."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return RESULT_TYPES[doc["experiment"]].from_json(doc["result"])
