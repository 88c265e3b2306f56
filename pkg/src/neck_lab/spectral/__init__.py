"""The Lichnerowicz system on the shrinking cylinder in spectral form."""

from neck_lab.spectral.decomposition import (
    DecomposedComponent,
    SliceTensor,
    TensorDecomposition,
    decompose,
    reassembly_residual,
)
from neck_lab.spectral.identities import (
    lichnerowicz_identity_residual,
    mode_system_residual,
    neutral_solution_residuals,
    norm_subsolution_residual,
)
from neck_lab.spectral.killing import (
    ConformalKillingRemoval,
    conformal_killing_removal,
    vector_heat_operator,
)
from neck_lab.spectral.modes import (
    ModeCoefficient,
    mode_evolve,
    mode_evolve_direct,
    mode_shift,
    substitution_power,
)
from neck_lab.spectral.norms import WeightedNorm, weighted_norm
from neck_lab.spectral.profile import (
    ProfileFit,
    ProfileWindow,
    SpectralMode,
    SpectralTrajectory,
    asymptotic_profile,
    profile_decay,
    random_trajectory,
)

__all__ = [
    "ConformalKillingRemoval",
    "DecomposedComponent",
    "ModeCoefficient",
    "ProfileFit",
    "ProfileWindow",
    "SliceTensor",
    "SpectralMode",
    "SpectralTrajectory",
    "TensorDecomposition",
    "WeightedNorm",
    "asymptotic_profile",
    "conformal_killing_removal",
    "decompose",
    "lichnerowicz_identity_residual",
    "mode_evolve",
    "mode_evolve_direct",
    "mode_shift",
    "mode_system_residual",
    "neutral_solution_residuals",
    "norm_subsolution_residual",
    "profile_decay",
    "random_trajectory",
    "reassembly_residual",
    "substitution_power",
    "vector_heat_operator",
    "weighted_norm",
]
