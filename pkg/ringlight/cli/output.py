"""
CSV and JSON writers.

CSV: header row, '.' decimals, 17 significant digits, '\\n' line endings.
JSON: orjson with sorted keys and two-space indent.
"""

import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import orjson
import pandas as pd
from pydantic import BaseModel

from ringlight.core.logging import get_logger
from ringlight.schemas.reports import TableReport

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"
JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def dumps_json(payload: Any) -> str:
    """orjson text for a pydantic model or plain data, newline terminated."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    return orjson.dumps(payload, option=JSON_OPTIONS).decode("utf-8") + "\n"


def frame_to_report(frame: pd.DataFrame, kind: str,
                    parameters: Optional[Dict[str, Any]] = None) -> TableReport:
    rows = [[None if np.isnan(value) else float(value) for value in row]
            for row in frame.to_numpy(dtype=float)]
    return TableReport(kind=kind, parameters=parameters or {},
                       columns=[str(c) for c in frame.columns], rows=rows)


def write_text(text: str, path: Optional[str]) -> None:
    """Write to ``path``, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("output written", path=str(target), bytes=len(text))


def write_table(frame: pd.DataFrame, path: Optional[str], fmt: str, kind: str,
                parameters: Optional[Dict[str, Any]] = None) -> None:
    if fmt == "json":
        write_text(dumps_json(frame_to_report(frame, kind, parameters)), path)
    else:
        write_text(frame_to_csv(frame), path)
