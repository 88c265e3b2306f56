"""
Plot-data export.

Tables are written as CSV with a header row and full float precision.
The column layouts of the standard tables are fixed here:

    mode trajectory     z, t, value
    residual vs L       L, residual, slope
    Bryant profile      z, phi, f, R
"""

from __future__ import annotations

import logging
import re
from collections.abc import Sequence
from pathlib import Path
from typing import Protocol

import pandas as pd

from neck_lab.core.exceptions import InputValidationError
from neck_lab.flows.warped import WarpedProfile, profile_frame
from neck_lab.heat.finite_difference import HeatField
from neck_lab.reporting.report import Report, atomic_write_text

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

TRAJECTORY_COLUMNS = ("z", "t", "value")
DECAY_COLUMNS = ("L", "residual", "slope")
BRYANT_COLUMNS = ("z", "phi", "f", "R")


class Tabular(Protocol):
    """Anything with a to_frame method."""

    def to_frame(self) -> pd.DataFrame: ...


def trajectory_frame(field: HeatField) -> pd.DataFrame:
    """Long-format (z, t, value) table of a mode coefficient."""
    frame = field.to_frame().rename(columns={"u": "value"})
    return frame.loc[:, list(TRAJECTORY_COLUMNS)]


def decay_frame(lengths: Sequence[float], residuals: Sequence[float], slope: float) -> pd.DataFrame:
    """(L, residual, slope) table; the fitted slope is repeated on every row."""
    if len(lengths) != len(residuals):
        raise InputValidationError("one residual per length is required", field="residuals")
    return pd.DataFrame(
        {"L": list(lengths), "residual": list(residuals), "slope": [slope] * len(lengths)}
    )


def bryant_frame(profile: WarpedProfile) -> pd.DataFrame:
    """(z, phi, f, R) table; R is NaN at the two end points."""
    return profile_frame(profile).loc[:, list(BRYANT_COLUMNS)]


def case_filename(name: str) -> str:
    """
    File name of the table of a case.

    Example:
        >>> case_filename("lichnerowicz.profile_decay")
        'lichnerowicz.profile_decay.csv'
    """
    slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_")
    if not slug:
        raise InputValidationError(f"case name has no usable characters: {name!r}", field="name")
    return f"{slug}.csv"


def export_plot_data(data: pd.DataFrame | Tabular, path: Path) -> Path:
    """
    Write a table to CSV with a header row.

    Args:
        data: A DataFrame, or an object with a to_frame method.
        path: Target file; parent directories are created.

    Returns:
        The path written.

    Raises:
        InputValidationError: If the table is empty.
    """
    frame = data if isinstance(data, pd.DataFrame) else data.to_frame()
    if frame.empty:
        raise InputValidationError(f"no rows to export to {path}", field="data")
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    atomic_write_text(Path(path), text)
    logger.debug("Exported %d rows to %s", len(frame), path)
    return Path(path)


def export_case_tables(report: Report, out_dir: Path) -> list[Path]:
    """Write the table of every case that carries one; returns the paths in case order."""
    paths = []
    for case in report.cases:
        if case.table is None or case.table.empty:
            continue
        paths.append(export_plot_data(case.table, Path(out_dir) / case_filename(case.name)))
    return paths
