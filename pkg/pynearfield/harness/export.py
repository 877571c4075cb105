"""
CSV and JSON output.

Every CSV starts with a `# config: <json>` comment line carrying the resolved
configuration. Floats are written with `repr`, and JSON keys are sorted, so
identical runs produce identical files.
"""
import csv
from enum import Enum
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from .figures import FigureResult, Table


logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Converts numpy scalars and arrays, enums, tuples and non-finite floats
    to plain JSON values (non-finite floats become None).
    """
    match value:
        case dict():
            return {str(k): to_jsonable(v) for k, v in value.items()}
        case list() | tuple():
            return [to_jsonable(v) for v in value]
        case np.ndarray():
            return [to_jsonable(v) for v in value.tolist()]
        case Enum():
            return value.value
        case bool() | np.bool_():
            return bool(value)
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            return float(value) if math.isfinite(value) else None
        case _:
            return value


def _dumps(value: Any, indent: int | None = None) -> str:
    return json.dumps(to_jsonable(value), indent=indent, sort_keys=True, ensure_ascii=False)


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_table(path: str | Path, table: Table, config: dict | None = None) -> Path:
    """Writes `table` as CSV, preceded by the configuration comment line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {_dumps(config)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
    logger.debug(f"Wrote {len(table.rows)} rows to {path}")
    return path


def write_summary(path: str | Path, summary: dict, config: dict | None = None) -> Path:
    """Writes the JSON summary `{"config": …, "summary": …}`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_dumps({"config": config, "summary": summary}, indent=2) + "\n", encoding="utf-8")
    return path


def write_figure(result: FigureResult, out_dir: str | Path) -> list[Path]:
    """Writes every table of `result` and its summary to `out_dir`."""
    out_dir = Path(out_dir)
    written = [write_table(out_dir / f"{stem}.csv", table, result.config) for stem, table in result.tables.items()]
    written.append(write_summary(out_dir / f"{result.name}_summary.json", result.summary, result.config))
    logger.info(f"{result.name}: wrote {', '.join(p.name for p in written)} to {out_dir}")
    return written
