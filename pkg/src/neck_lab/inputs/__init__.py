"""
Inputs module: pydantic run configuration and its JSON loader.

This package validates the config file and command-line flags before
any suite runs.
"""

from neck_lab.inputs.loaders import (
    OUT_ENV_VAR,
    apply_overrides,
    load_config,
    resolve_output_dir,
)
from neck_lab.inputs.schemas import GridConfig, SuiteConfig, ToleranceConfig

__all__ = [
    "SuiteConfig",
    "ToleranceConfig",
    "GridConfig",
    "OUT_ENV_VAR",
    "load_config",
    "apply_overrides",
    "resolve_output_dir",
]
