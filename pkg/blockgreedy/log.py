"""Logging setup built on loguru."""

import sys

from loguru import logger

from blockgreedy.config import settings


def configure_logging(level: str | None = None, json: bool | None = None) -> None:
    """Install a single stderr sink, JSON-serialized when requested."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=(level or settings.log_level).upper(),
        serialize=settings.log_json if json is None else json,
        backtrace=settings.debug,
        diagnose=settings.debug,
    )
