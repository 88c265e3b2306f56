"""Core domain types, constants and exceptions."""

from neck_lab.core.exceptions import NeckLabError
from neck_lab.core.types import FloatArray, reference_time

__all__ = ["FloatArray", "NeckLabError", "reference_time"]
