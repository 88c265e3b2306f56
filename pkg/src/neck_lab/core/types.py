"""
Domain-specific type aliases, constants and enumerations.

This module defines type aliases for documentation and IDE support,
as well as enumerations for categorical values used throughout the
laboratory.

Note: Type aliases in Python do not provide runtime enforcement.
They serve as documentation and enable static type checking with mypy.

Naming Convention:
    - Variables: snake_case (phi, k_rad, omega_bar)
    - Constants: SCREAMING_SNAKE_CASE
    - Type Aliases: PascalCase
    - Enums: PascalCase with SCREAMING_SNAKE_CASE members
"""

from enum import Enum, auto
from typing import TypeAlias

import numpy as np
import numpy.typing as npt


# =============================================================================
# CONSTANTS
# =============================================================================

SYMMETRY_TOLERANCE: float = 1e-12
"""Tolerance for the algebraic symmetries of a curvature tensor."""

ORTHONORMAL_TOLERANCE: float = 1e-10
"""Tolerance for orthonormality of frames and so(n) bases."""

BLOWUP_TRACE: float = 1e6
"""Hamilton ODE integration stops once tr A exceeds this value."""

EPSILON_0: float = 0.05
"""Admissibility gate for metric perturbations of the unit cylinder."""

NEWTON_TOLERANCE: float = 1e-12
"""Default residual target for CMC Newton iterations."""

KERNEL_TAIL_TARGET: float = 1e-14
"""A priori image-tail bound targeted when choosing the kernel truncation."""

EXACT_QUADRATURE_DEGREE: int = 6
"""Largest polynomial degree integrated exactly over the sphere."""


def reference_time(n: int) -> float:
    """
    Unit-radius time t_n = -1/(2(n-2)) of the shrinking cylinder.

    Example:
        >>> reference_time(4)
        -0.25
    """
    return -1.0 / (2.0 * (n - 2))


# =============================================================================
# ARRAY TYPE ALIASES
# =============================================================================

FloatArray: TypeAlias = npt.NDArray[np.float64]
"""Real-valued numpy array of any shape."""

Vector: TypeAlias = npt.NDArray[np.float64]
"""One-dimensional real array of length n (a point or direction in R^n)."""

Matrix: TypeAlias = npt.NDArray[np.float64]
"""Two-dimensional real array, usually n x n."""

Grid: TypeAlias = npt.NDArray[np.float64]
"""Uniform one-dimensional grid of z or t values."""


# =============================================================================
# SCALAR ALIASES
# =============================================================================
# These aliases document the role of a float. They do NOT enforce anything.

Time: TypeAlias = float
"""Ricci flow time. The ancient range is t < 0."""

Height: TypeAlias = float
"""Axial coordinate z along the cylinder."""

Curvature: TypeAlias = float
"""Sectional, scalar or mean curvature in inverse length squared units."""


# =============================================================================
# ENUMERATIONS
# =============================================================================


class PICMode(Enum):
    """
    Isotropic curvature condition being tested.

    - PIC: lambda = mu = 1 fixed
    - PIC1: mu = 1 fixed, lambda free in [0, 1]
    - PIC2: lambda and mu free in [0, 1]
    """

    PIC = auto()
    PIC1 = auto()
    PIC2 = auto()


class UniformPICCriterion(Enum):
    """
    Criterion used to decide uniform PIC.

    - BLOCK: min{a1+a2, c1+c2} >= alpha * max{a3, b3, c3} (n = 4 only)
    - SCALAR: min PIC >= alpha * scal (any n >= 4)
    """

    BLOCK = auto()
    SCALAR = auto()


class ConeKind(Enum):
    """
    Invariant cones of the four-dimensional Hamilton ODE.

    - C0: the base cone parametrized by Phi
    - C_S: the cone C(s) that adds s(a1+a2+a3) <= a1 and the c-analogue
    - C_TILDE: the cone with s*b3^2 <= a1*c1 and the q(s) product bound
    """

    C0 = auto()
    C_S = auto()
    C_TILDE = auto()


class ModeKind(Enum):
    """
    Component of a symmetric 2-tensor on the cylinder.

    Each kind shifts the sphere eigenvalue in the mode equation
    c_t = c_zz - (eig + shift) / (2(n-2)(-t)) * c; the shift depends on n
    and is given by mode_shift(). VECTOR is the vector heat operator on
    sphere-tangent fields.
    """

    OMEGA = "omega"
    CHI = "chi"
    SIGMA = "sigma"
    BETA = "beta"
    VECTOR = "vector"


class Suite(Enum):
    """Verification suites runnable from the command line."""

    CURVATURE = "curvature"
    CONES4D = "cones4d"
    WARPED = "warped"
    BRYANT = "bryant"
    HEAT = "heat"
    LICHNEROWICZ = "lichnerowicz"
    CMC = "cmc"
    SYMMETRY = "symmetry"
    ALL = "all"


class CaseStatus(Enum):
    """Outcome of a single verification case."""

    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"
