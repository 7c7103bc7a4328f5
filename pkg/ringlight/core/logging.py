"""
Structured logging configuration using structlog.
JSON lines for batch runs, human-readable console output otherwise.

Importing the package installs the processor chain on top of the standard
library loggers, so library use without ``setup_logging`` reports warnings
and errors on stderr and nothing else.
"""

import logging
import sys
from typing import Any, Dict, List, Optional

import structlog
from structlog.stdlib import LoggerFactory

from ringlight.core.config import settings


def _processors() -> List[Any]:
    return [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.JSONRenderer()
        if settings.log_format == "json"
        else structlog.dev.ConsoleRenderer(colors=False),
    ]


def configure_default() -> None:
    """
    Route structlog through the standard library unless already configured.

    The root logger is left alone; without handlers the standard library
    prints WARNING and above to stderr.
    """
    if structlog.is_configured():
        return
    structlog.configure(
        processors=_processors(),
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        # setup_logging may still replace the chain
        cache_logger_on_first_use=False,
    )


def setup_logging(level: Optional[str] = None) -> None:
    """Configure structured logging for the command-line tools."""

    structlog.configure(
        processors=_processors(),
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # Data goes to files/stdout; diagnostics stay on stderr.
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, (level or settings.log_level).upper()),
        force=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def log_context(**kwargs: Any) -> Dict[str, Any]:
    """Create a logging context dictionary."""
    return kwargs


configure_default()
