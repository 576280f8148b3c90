"""Trace files.

A trace is a CSV table ``t,loss,cumloss,regret_to_date`` (one row per round,
floats in shortest round-trip form, ``regret_to_date`` blank when not
computed) plus a ``.meta.yaml`` sidecar with every run parameter. Nothing
time-dependent is written, so reruns are byte-identical.
"""

from __future__ import annotations

import csv
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from ruamel.yaml import YAML

from ..solvers import RegretTrace
from ..utils.logging import get_logger

logger = get_logger(__name__)

TRACE_HEADER = ("t", "loss", "cumloss", "regret_to_date")


class TraceWriteError(Exception):
    """Raised when a trace or its sidecar cannot be written."""

    def __init__(self, path: Path, cause: Exception) -> None:
        self.path = path
        self.cause = cause
        super().__init__(f"Cannot write {path}: {cause}")


def sidecar_path(path: Path) -> Path:
    """``runs/seed_3.csv`` -> ``runs/seed_3.meta.yaml``."""
    return path.with_name(f"{path.stem}.meta.yaml")


def _number(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def plain(value: Any) -> Any:
    """Convert numpy scalars, tuples, paths, enums and fractions to YAML-safe data."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [plain(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path | Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_yaml(data: Any, path: Path) -> None:
    """Dump plain data as block-style YAML."""
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    with path.open("w") as f:
        yaml.dump(plain(data), f)


def emit_trace(trace: RegretTrace, path: Path) -> Path:
    """Write the trace table and its metadata sidecar.

    Args:
        trace: Completed run.
        path: Table file; parent directories are created.

    Returns:
        The sidecar path.

    Raises:
        TraceWriteError: On any I/O failure.
    """
    meta = sidecar_path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TRACE_HEADER)
            for record in trace.records:
                writer.writerow(
                    (
                        record.t,
                        _number(record.loss),
                        _number(record.cumulative_loss),
                        _number(record.regret_to_date),
                    )
                )
        write_yaml(trace.metadata, meta)
    except OSError as e:
        raise TraceWriteError(path, e) from e
    logger.debug("Wrote %d rows to %s", trace.horizon, path)
    return meta


def read_trace(path: Path) -> list[dict[str, str]]:
    """Rows of a trace table as strings keyed by header."""
    with path.open(newline="") as f:
        return list(csv.DictReader(f))
