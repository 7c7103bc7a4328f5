"""
Pydantic schemas for JSON outputs.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class BaseReport(BaseModel):
    """Every JSON output carries the schema version."""

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION)


class TableReport(BaseReport):
    """A table as column names plus rows; missing values are null."""

    kind: str = Field(..., description="simulate, chart or figure name")
    parameters: Dict[str, Any] = Field(default_factory=dict)
    columns: List[str]
    rows: List[List[Optional[float]]]


class OptimizeReport(BaseReport):
    family: str
    best_params: Dict[str, float]
    nu: float = Field(..., description="Re nu at best_params")
    evaluations: int


class FigureSidecar(BaseReport):
    """Parameters behind a figure data file."""

    figure: str
    data_file: str
    columns: List[str]
    parameters: Dict[str, Any] = Field(default_factory=dict)
