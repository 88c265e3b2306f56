"""
JSON config loading and command-line overrides.

A run is configured by an optional JSON file whose keys mirror
SuiteConfig; flags given on the command line replace file values, and
the NECK_LAB_OUT environment variable replaces the output directory.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from neck_lab.core.exceptions import InputValidationError
from neck_lab.inputs.schemas import SuiteConfig

OUT_ENV_VAR = "NECK_LAB_OUT"


def load_config(path: Path) -> SuiteConfig:
    """
    Load and validate a JSON config file.

    Args:
        path: Path to the JSON file.

    Returns:
        SuiteConfig instance.

    Raises:
        InputValidationError: If the file is missing, unreadable or invalid.
    """
    text = _read_text(path)
    try:
        return SuiteConfig.model_validate_json(text)
    except ValidationError as exc:
        raise InputValidationError(
            f"Config validation failed for {path}: {exc}", field=_first_field(exc)
        ) from exc


def apply_overrides(config: SuiteConfig, **flags: Any) -> SuiteConfig:
    """
    Merge command-line flags into a config; flags that are None are ignored.

    The merged data is validated again, so a bad flag is reported exactly
    like a bad file entry.

    Raises:
        InputValidationError: If an override is unknown or invalid.
    """
    updates = {name: value for name, value in flags.items() if value is not None}
    unknown = _unknown_keys(updates, SuiteConfig.model_fields.keys())
    if unknown:
        raise InputValidationError(f"Unknown config keys: {sorted(unknown)}.", field=unknown[0])
    data = config.model_dump()
    data.update(updates)
    try:
        return SuiteConfig.model_validate(data)
    except ValidationError as exc:
        field = _first_field(exc)
        raise InputValidationError(
            f"Invalid value for '{field}': {exc}", field=field, value=updates.get(field or "")
        ) from exc


def resolve_output_dir(config: SuiteConfig, environ: Mapping[str, str] | None = None) -> Path:
    """
    Output directory of a run: NECK_LAB_OUT when set and non-empty, else config.out.

    Example:
        >>> resolve_output_dir(SuiteConfig(), {"NECK_LAB_OUT": "/tmp/x"}).as_posix()
        '/tmp/x'
    """
    env = os.environ if environ is None else environ
    value = env.get(OUT_ENV_VAR, "").strip()
    return Path(value) if value else config.out


def _read_text(path: Path) -> str:
    """
    Read a config file with standard error handling.

    Raises:
        InputValidationError: If the file cannot be read.
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except (FileNotFoundError, OSError, UnicodeDecodeError) as exc:
        raise InputValidationError(f"Failed to read config {path}: {exc}", field="config") from exc


def _first_field(exc: ValidationError) -> str | None:
    """Dotted location of the first validation error."""
    errors = exc.errors()
    if not errors:
        return None
    return ".".join(str(part) for part in errors[0]["loc"]) or None


def _unknown_keys(data: Mapping[str, Any], allowed: Any) -> list[str]:
    return sorted(set(data) - set(allowed))
