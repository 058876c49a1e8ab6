"""
Report rendering for the CLI.

A report is one YAML mapping with sorted keys plus optional TSV tables.
Everything that varies between identical runs (timestamp, wall time) is
kept under keys that --no-timestamp drops, so reports of the same manifest
are byte-identical.
"""

import logging
import math
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

import numpy as np
import yaml

from ..mmio import write_matrix_market

logger = logging.getLogger(__name__)

REPORT_FILE = "report.yaml"
VOLATILE_KEYS = ("timestamp", "wall_time")


def to_plain(value: Any) -> Any:
    """Convert numpy scalars/arrays, enums, tuples and paths to YAML-safe types."""
    if isinstance(value, Mapping):
        return {str(k.value if isinstance(k, Enum) else k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def stamp(report: Dict[str, Any], started: float, finished: float, include: bool) -> Dict[str, Any]:
    """Add timestamp and wall time unless include is off."""
    if include:
        report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        report["wall_time"] = round(finished - started, 6)
    return report


def render_report(report: Mapping[str, Any]) -> str:
    return yaml.safe_dump(to_plain(report), sort_keys=True, default_flow_style=False)


def _cell(value: Optional[float]) -> str:
    if value is None:
        return "nan"
    if math.isinf(value):
        return "inf"
    return f"{value:.17g}"


def residual_table(history: Sequence[float]) -> str:
    """Two columns: iteration index and relative residual."""
    lines = ["iteration\tresidual"]
    lines.extend(f"{k}\t{_cell(float(r))}" for k, r in enumerate(history))
    return "\n".join(lines) + "\n"


def sweep_table(rows: Iterable) -> str:
    """alpha, rho(T_alpha), bound(alpha) per row."""
    lines = ["alpha\trho\tbound"]
    lines.extend(f"{_cell(r.alpha)}\t{_cell(r.rho)}\t{_cell(r.bound)}" for r in rows)
    return "\n".join(lines) + "\n"


def write_outputs(
    out: Optional[Path],
    report_text: str,
    tables: Mapping[str, str],
    matrices: Mapping[str, np.ndarray],
    echo=print,
) -> None:
    """
    Write report.yaml, tables and matrices under out.

    Without an output directory only the report is emitted, through echo.
    """
    if out is None:
        echo(report_text, end="")
        return
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / REPORT_FILE).write_text(report_text)
    for name, text in tables.items():
        (out / name).write_text(text)
    for name, matrix in matrices.items():
        write_matrix_market(out / f"{name}.mtx", matrix)
    logger.info(f"Wrote {1 + len(tables) + len(matrices)} files to {out}")
