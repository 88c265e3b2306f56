"""
Suites module: the registered checks of every verification suite.

REGISTRY maps each runnable suite to its ordered checks; `all` runs them
in enum order.
"""

from neck_lab.core.types import Suite
from neck_lab.suites import bryant, cmc, cones4d, curvature, heat, lichnerowicz, symmetry, warped
from neck_lab.suites.base import CaseSpec, run_check, run_checks, run_suite

REGISTRY: dict[Suite, tuple[CaseSpec, ...]] = {
    module.SUITE: module.CASES
    for module in (curvature, cones4d, warped, bryant, heat, lichnerowicz, cmc, symmetry)
}

__all__ = ["REGISTRY", "CaseSpec", "run_check", "run_checks", "run_suite"]
