"""
Pydantic schemas for neck-lab run configuration.

These models validate a JSON config file and the command-line flags
before any suite runs. The defaults reproduce the acceptance runs, so a
bare `neck-lab all` checks every criterion at its published tolerance.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from neck_lab.core.types import Suite

DEFAULT_OUT = Path("neck-lab-out")


class ToleranceConfig(BaseModel):
    """
    Pass/fail tolerances, one per measured quantity.

    Every field is an absolute bound unless its description says otherwise.
    """

    model_config = ConfigDict(extra="forbid")

    # Curvature
    cylinder: float = Field(default=1e-12, gt=0, description="Cylinder identities")
    pic: float = Field(default=1e-3, gt=0, description="Minimum PIC against its exact value")
    boundary_alpha: float = Field(default=1e-6, gt=0, description="Uniform-PIC boundary alpha")
    pinch_norm: float = Field(default=1e-10, gt=0, description="Pinch norm vs bisection")

    # Cones
    trace_identity: float = Field(default=1e-10, gt=0, description="d/dt tr A identity")
    cone_margin: float = Field(default=1e-8, gt=0, description="Normalized cone margins")

    # Flows
    bryant_conserved: float = Field(default=1e-8, gt=0, description="R + f'^2 = 1")
    soliton_residual: float = Field(default=1e-6, gt=0, description="|Ric - D^2 f|")
    decay_ratio: float = Field(default=3.0, gt=1, description="Max C/c of R z on the tail")
    shrinking: float = Field(default=1e-5, gt=0, description="Warped flow vs the exact radius")

    # Heat
    heat_boundary: float = Field(default=1e-14, gt=0, description="Kernel on the boundary")
    heat_agreement: float = Field(default=1e-5, gt=0, description="Representation vs FD")
    kernel_mass: float = Field(default=2.0, gt=0, description="Bound on the integral of |S|")

    # Spectral
    convergence_ratio: float = Field(
        default=0.3, gt=0, description="Half-width around the refinement ratio 4"
    )
    exponent: float = Field(default=1e-6, gt=0, description="Fitted growing-mode exponent")
    slope_margin: float = Field(default=0.1, ge=0, description="Slack on the profile decay slope")
    neutral: float = Field(default=1e-10, gt=0, description="Neutral solution residuals")
    identity: float = Field(default=1e-6, gt=0, description="Lie derivative mode-system residual")
    subsolution: float = Field(default=1e-8, gt=0, description="|V| subsolution defect")

    # Foliation
    newton: float = Field(default=1e-10, gt=0, description="CMC Newton residual")
    newton_iterations: int = Field(default=10, ge=1, description="Iterations allowed")
    uniqueness: float = Field(default=1e-8, gt=0, description="Spread across starts")
    cmc_spread: float = Field(default=1e-8, gt=0, description="Mean curvature spread")
    jacobi: float = Field(default=1e-6, gt=0, description="Jacobi lapse residual")
    linearity: float = Field(default=0.1, gt=0, description="Relative slack on a decade ratio")

    # Symmetry
    reconstruction: float = Field(default=1e-14, gt=0, description="Canonical bracket table")
    random_reconstruction: float = Field(default=1e-12, gt=0, description="Random basis table")
    deficit: float = Field(default=1e-10, gt=0, description="Deficits of the exact family")
    gauge: float = Field(default=1e-9, gt=0, description="Relative change under O(N) conjugation")
    procrustes: float = Field(default=1e-12, gt=0, description="Exact Procrustes recovery")
    glue_linearity: float = Field(default=0.2, gt=0, description="Relative slack on glue ratios")

    def scaled(self, factor: float) -> ToleranceConfig:
        """Every float tolerance multiplied by factor; counts and ratios of decades unchanged."""
        if factor <= 0:
            raise ValueError(f"factor must be positive: {factor}")
        fixed = {"newton_iterations", "decay_ratio", "kernel_mass"}
        data = {
            name: value if name in fixed else value * factor
            for name, value in self.model_dump().items()
        }
        return ToleranceConfig(**data)


class GridConfig(BaseModel):
    """
    Sample counts, grids and lengths of the suites.
    """

    model_config = ConfigDict(extra="forbid")

    oracle_samples: int = Field(default=1_000_000, ge=1, description="Brute-force PIC frames")
    frame_budget: int = Field(default=32, ge=1, description="Starting frames per minimization")
    random_operators: int = Field(default=1000, ge=1)
    sign_margin: float = Field(default=1e-6, ge=0, description="Skip near-boundary operators")
    pinch_samples: int = Field(default=1000, ge=1)

    trajectories: int = Field(default=100, ge=1, description="Trace identity trajectories")
    cone_starts: int = Field(default=1000, ge=1, description="Interior starts per Phi")
    cone_phis: tuple[float, ...] = Field(default=(1.0, 10.0), min_length=1)
    trajectory_horizon: float = Field(default=0.25, gt=0, description="t_max of identity runs")

    warped_dimensions: tuple[int, ...] = Field(default=(4, 5, 6, 7, 8), min_length=1)
    bryant_z_max: float = Field(default=100.0, gt=10.0)
    bryant_dz: float = Field(default=1e-3, gt=0)
    bryant_samples: int = Field(default=8, ge=1, description="PIC2 sample points")

    heat_length: float = Field(default=10.0, gt=0)
    heat_samples: int = Field(default=3, ge=1, description="Random initial data")

    lengths: tuple[float, ...] = Field(default=(20.0, 40.0, 80.0), min_length=1)

    cmc_starts: int = Field(default=20, ge=1)
    cmc_delta: float = Field(default=0.01, gt=0, le=0.05)

    glue_epsilons: tuple[float, ...] = Field(default=(1e-2, 1e-3, 1e-4), min_length=2)
    sphere_samples: int = Field(default=300, ge=10)


class SuiteConfig(BaseModel):
    """
    Full run configuration: which suite, where to write, and how strictly to judge.

    Example:
        >>> SuiteConfig(suite="cones4d", seed=7).suite.value
        'cones4d'
    """

    model_config = ConfigDict(extra="forbid")

    suite: Suite = Suite.ALL
    n: int = Field(default=4, ge=4, le=8, description="Dimension of the primary runs")
    seed: int = Field(default=0, ge=0)
    length: float | None = Field(default=None, ge=4.0, description="Extra neck length L")
    out: Path = DEFAULT_OUT
    jobs: int = Field(default=1, ge=1, description="Worker processes")
    tol_scale: float = Field(default=1.0, gt=0, description="Multiplier on every tolerance")
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    grid: GridConfig = Field(default_factory=GridConfig)

    @property
    def lengths(self) -> tuple[float, ...]:
        """Neck lengths of the spectral and improvement runs, sorted; --L adds one."""
        extra = () if self.length is None else (self.length,)
        return tuple(sorted(set(self.grid.lengths) | set(extra)))

    def effective_tolerances(self) -> ToleranceConfig:
        """Tolerances after --tol-scale."""
        return self.tolerances.scaled(self.tol_scale)
