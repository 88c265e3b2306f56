"""Verification cases, report.json and plot-data export."""

from neck_lab.reporting.export import (
    bryant_frame,
    case_filename,
    decay_frame,
    export_case_tables,
    export_plot_data,
    trajectory_frame,
)
from neck_lab.reporting.report import (
    PLUMBING,
    SCHEMA_VERSION,
    Case,
    Relation,
    Report,
    error_case,
    judge,
    load_report,
    merge_reports,
    validate_report,
    write_report,
)

__all__ = [
    "PLUMBING",
    "SCHEMA_VERSION",
    "Case",
    "Relation",
    "Report",
    "bryant_frame",
    "case_filename",
    "decay_frame",
    "error_case",
    "export_case_tables",
    "export_plot_data",
    "judge",
    "load_report",
    "merge_reports",
    "trajectory_frame",
    "validate_report",
    "write_report",
]
