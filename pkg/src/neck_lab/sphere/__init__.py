"""Exact polynomial calculus on S^{n-1} and rotational vector-field families."""

from neck_lab.sphere.alignment import (
    AlignmentResult,
    GlueResult,
    SampledFamily,
    SmoothStep,
    cutoff_glue,
    procrustes_align,
)
from neck_lab.sphere.fields import (
    ConformalSphereMetric,
    CylinderVectorField,
    SphereTensorField,
    SphereVectorField,
    cylinder_lie_derivative,
    lie_derivative_metric,
)
from neck_lab.sphere.harmonics import (
    HarmonicFunction,
    gradient_field,
    harmonic_basis,
    project_levels,
)
from neck_lab.sphere.polynomials import SpherePolynomial, sphere_volume
from neck_lab.sphere.quadrature import QuadratureMethod, QuadratureResult, quadrature
from neck_lab.sphere.rotations import (
    RotationFamily,
    canonical_scale,
    family_gram,
    structure_constants,
)

__all__ = [
    "AlignmentResult",
    "ConformalSphereMetric",
    "CylinderVectorField",
    "GlueResult",
    "HarmonicFunction",
    "QuadratureMethod",
    "QuadratureResult",
    "RotationFamily",
    "SampledFamily",
    "SmoothStep",
    "SpherePolynomial",
    "SphereTensorField",
    "SphereVectorField",
    "canonical_scale",
    "cutoff_glue",
    "cylinder_lie_derivative",
    "family_gram",
    "gradient_field",
    "harmonic_basis",
    "lie_derivative_metric",
    "procrustes_align",
    "project_levels",
    "quadrature",
    "sphere_volume",
    "structure_constants",
]
