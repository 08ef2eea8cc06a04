"""
Shared output components for the semigroup contour-quadrature toolkit.
"""

import logging
import os
import sys
from typing import Dict, Optional

import pandas as pd

from config import CSV_FLOAT_FORMAT, CSV_HEADER_PREFIX, LOG_FORMAT, LOG_LEVELS, VERSION

logger = logging.getLogger(__name__)


def configure_logging(verbosity: int = 0):
    """Configure root logging from the -v count"""
    level = LOG_LEVELS.get(min(verbosity, max(LOG_LEVELS)), "WARNING")
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def write_csv(frame: pd.DataFrame, path: Optional[str] = None):
    """Write a frame as CSV with the version header; stdout when path is None"""
    if path is None:
        _write(frame, sys.stdout)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="\n") as handle:
        _write(frame, handle)
    logger.info("wrote %d rows to %s", len(frame), path)


def _write(frame: pd.DataFrame, handle):
    handle.write(f"{CSV_HEADER_PREFIX} {VERSION}\n")
    frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_tables(tables: Dict[str, pd.DataFrame], directory: str):
    """Write each named table to <directory>/<name>.csv"""
    for name, frame in tables.items():
        write_csv(frame, os.path.join(directory, f"{name}.csv"))
