"""
INI-style config files with command-line overrides.

    [modulation]
    kind = rectangular
    f_r = 2
    period = 1

    [bath]
    gamma = 0.05
    nbar = 1

    [run]
    n_periods = 100

Lists (``samples``) and axis ranges are comma separated. In ``[optimize]``
a key with two values is a bound, a key with one value is held fixed.
"""

import configparser
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ValidationError

from ringlight.core.exceptions import ConfigError
from ringlight.core.logging import get_logger
from ringlight.schemas.config import AxisRange, ChartRequest, OptimizeRequest, RunConfig

logger = get_logger(__name__)

RUN_SECTIONS = ("modulation", "bath", "initial", "run", "output")
_OPTIMIZE_KEYS = ("family", "budget", "grid_points")
_CHART_AXES = ("axis1", "axis2")


def read_ini(path: Optional[str]) -> configparser.ConfigParser:
    """Parse ``path``; None gives an empty parser."""
    parser = configparser.ConfigParser(interpolation=None)
    if path is None:
        return parser
    file = Path(path)
    if not file.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        parser.read_string(file.read_text(encoding="utf-8"), source=str(file))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    logger.debug("config file read", path=str(file), sections=parser.sections())
    return parser


def _split_floats(text: str, key: str) -> list:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{key} must be a comma-separated list of numbers, got {text!r}") from None


def _merge(base: Dict[str, Any], overrides: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return merged


def _validate(model: type, data: Dict[str, Any]) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or model.__name__
        raise ConfigError(f"invalid configuration at {where}: {first['msg']}") from exc


def load_run_config(path: Optional[str] = None,
                    overrides: Optional[Mapping[str, Mapping[str, Any]]] = None) -> RunConfig:
    """RunConfig from an INI file, then per-section flag overrides."""
    parser = read_ini(path)
    unknown = set(parser.sections()) - set(RUN_SECTIONS) - {"chart", "optimize"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    data: Dict[str, Any] = {}
    for section in RUN_SECTIONS:
        values: Dict[str, Any] = dict(parser[section]) if parser.has_section(section) else {}
        if "samples" in values:
            values["samples"] = _split_floats(values["samples"], "samples")
        values = _merge(values, (overrides or {}).get(section))
        if values:
            data[section] = values
    return _validate(RunConfig, data)


def load_chart_request(path: Optional[str] = None,
                       overrides: Optional[Mapping[str, Any]] = None) -> ChartRequest:
    """ChartRequest from the ``[chart]`` section; axes are 'start, stop[, num]'."""
    parser = read_ini(path)
    values: Dict[str, Any] = dict(parser["chart"]) if parser.has_section("chart") else {}
    values = _merge(values, overrides)
    for axis in _CHART_AXES:
        if isinstance(values.get(axis), str):
            try:
                values[axis] = AxisRange.parse(values[axis]).model_dump()
            except (ValueError, ValidationError) as exc:
                raise ConfigError(f"invalid {axis}: {exc}") from None
    return _validate(ChartRequest, values)


def load_optimize_request(path: Optional[str] = None,
                          overrides: Optional[Mapping[str, Any]] = None) -> OptimizeRequest:
    """
    OptimizeRequest from the ``[optimize]`` section.

    ``overrides`` may carry family, budget, grid_points and the dicts
    ``bounds`` and ``fixed``, which extend the file's entries.
    """
    parser = read_ini(path)
    section = dict(parser["optimize"]) if parser.has_section("optimize") else {}
    data: Dict[str, Any] = {k: section.pop(k) for k in _OPTIMIZE_KEYS if k in section}
    bounds: Dict[str, Any] = {}
    fixed: Dict[str, Any] = {}
    for key, text in section.items():
        values = _split_floats(text, key)
        if len(values) == 2:
            bounds[key] = tuple(values)
        elif len(values) == 1:
            fixed[key] = values[0]
        else:
            raise ConfigError(f"optimize.{key} needs one value or a 'low, high' pair")
    overrides = dict(overrides or {})
    bounds.update(overrides.pop("bounds", None) or {})
    fixed.update(overrides.pop("fixed", None) or {})
    data = _merge(data, overrides)
    data["bounds"] = bounds
    data["fixed"] = fixed
    return _validate(OptimizeRequest, data)
