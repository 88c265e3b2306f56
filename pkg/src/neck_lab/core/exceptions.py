"""
Domain-specific exceptions for the neck-lab numerical laboratory.

This module defines a hierarchy of exceptions that provide clear,
actionable error messages for the failure modes of the geometric
computations (curvature algebra, flows, heat kernels, foliations).

Exception Hierarchy:
    NeckLabError (base)
    ├── InputValidationError        - Argument or config failed validation
    ├── DimensionError              - Operation not defined in this dimension
    ├── FrameError                  - Four-frame is not orthonormal
    ├── NotPositiveDefiniteError    - Ric - rho*g is not positive definite
    ├── TimeDomainError             - Time outside the ancient range t < 0
    ├── NeckpinchError              - Warp factor reached zero
    ├── ShootingError               - Soliton shooting did not converge
    ├── DomainWindowError           - Query outside the representation window
    ├── UnsupportedRepresentationError - Data outside the polynomial class
    ├── EmbeddingError              - Normal graph not embedded
    ├── AdmissibilityError          - Metric perturbation above epsilon_0
    ├── NewtonDivergenceError       - CMC Newton iteration failed
    ├── FoliationBreakdownError     - CMC leaves cross each other
    ├── WindowError                 - Neck window too small for epsilon
    └── HypothesisViolationError    - Profile hypotheses violated

Design Principle:
    Fail loudly on invalid inputs, never return a silently wrong number.
"""


class NeckLabError(Exception):
    """
    Base exception for all neck-lab errors.

    All domain-specific exceptions inherit from this class, allowing
    callers to catch every laboratory error with a single except clause
    while still being able to catch specific error types.

    Example:
        try:
            run(config)
        except NeckLabError as e:
            logger.error(f"Suite failed: {e}")
    """

    pass


class InputValidationError(NeckLabError):
    """
    Input data failed validation.

    Raised when an argument, a JSON config file or a serialized object
    does not conform to the expected schema.

    Typical Causes:
        - Unknown keys in a config file
        - Non-symmetric matrix where a symmetric one is required
        - Negative grid spacing or tolerance

    Args:
        message: Description of validation failure
        field: The specific field that failed validation (optional)
        value: The invalid value (optional)
    """

    def __init__(
        self,
        message: str,
        field: str | None = None,
        value: object | None = None,
    ) -> None:
        self.field = field
        self.value = value
        super().__init__(message)


class DimensionError(NeckLabError):
    """
    Operation requested in a dimension where it is not defined.

    The block decomposition and the Hamilton ODE exist only for n = 4,
    and the isotropic-curvature predicates need n >= 4.

    Args:
        message: Description of the mismatch
        n: The dimension that was supplied
        required: The dimension (or lower bound) that is required
    """

    def __init__(
        self,
        message: str,
        n: int | None = None,
        required: int | None = None,
    ) -> None:
        self.n = n
        self.required = required
        super().__init__(message)


class FrameError(NeckLabError):
    """
    Four-frame failed the orthonormality check.

    Args:
        message: Description of the failure
        defect: max |E^T E - I| of the supplied frame
    """

    def __init__(self, message: str, defect: float | None = None) -> None:
        self.defect = defect
        super().__init__(message)


class NotPositiveDefiniteError(NeckLabError):
    """
    The weight matrix Ric - rho*g is not positive definite.

    The weighted pinch norm is only defined when Ric > rho*g.

    Args:
        message: Description of the failure
        min_eigenvalue: Smallest eigenvalue of the weight matrix
    """

    def __init__(self, message: str, min_eigenvalue: float | None = None) -> None:
        self.min_eigenvalue = min_eigenvalue
        super().__init__(message)


class TimeDomainError(NeckLabError):
    """
    Time value outside the ancient range t < 0.

    The shrinking cylinder and every mode equation are singular at t = 0.

    Args:
        message: Description of the failure
        t: The offending time
    """

    def __init__(self, message: str, t: float | None = None) -> None:
        self.t = t
        super().__init__(message)


class NeckpinchError(NeckLabError):
    """
    Warp factor became nonpositive during a flow step.

    Typical Causes:
        - Genuine neckpinch of the initial profile
        - Time step above the explicit stability limit

    Args:
        message: Description of the failure
        z: Grid location where the warp factor collapsed
        time: Flow time at which it happened
    """

    def __init__(
        self,
        message: str,
        z: float | None = None,
        time: float | None = None,
    ) -> None:
        self.z = z
        self.time = time
        super().__init__(message)


class ShootingError(NeckLabError):
    """
    Shooting integration of the steady soliton failed.

    Args:
        message: Description of the failure
        residual: Last normalization residual observed (optional)
    """

    def __init__(self, message: str, residual: float | None = None) -> None:
        self.residual = residual
        super().__init__(message)


class DomainWindowError(NeckLabError):
    """
    Query point lies outside the window the representation covers.

    Args:
        message: Description of the failure
        point: The offending (z, t) pair
    """

    def __init__(self, message: str, point: tuple[float, float] | None = None) -> None:
        self.point = point
        super().__init__(message)


class UnsupportedRepresentationError(NeckLabError):
    """
    Data is outside the exact polynomial / spectral class.

    Typical Causes:
        - Spherical harmonic level above 2
        - Polynomial degree above the exact-integration cap

    Args:
        message: Description of the failure
        detail: What part of the representation was unsupported
    """

    def __init__(self, message: str, detail: str | None = None) -> None:
        self.detail = detail
        super().__init__(message)


class EmbeddingError(NeckLabError):
    """
    Normal graph over the reference slice is not embedded.

    Args:
        message: Description of the failure
        graph_norm: Sup norm of the graph function
    """

    def __init__(self, message: str, graph_norm: float | None = None) -> None:
        self.graph_norm = graph_norm
        super().__init__(message)


class AdmissibilityError(NeckLabError):
    """
    Metric perturbation exceeds the admissibility gate.

    The CMC construction is only attempted when ||g - g_bar|| <= epsilon_0.

    Args:
        message: Description of the failure
        epsilon_hat: Measured size of the perturbation
        epsilon_0: The gate value
    """

    def __init__(
        self,
        message: str,
        epsilon_hat: float | None = None,
        epsilon_0: float | None = None,
    ) -> None:
        self.epsilon_hat = epsilon_hat
        self.epsilon_0 = epsilon_0
        super().__init__(message)


class NewtonDivergenceError(NeckLabError):
    """
    Newton iteration for a CMC leaf did not converge.

    Typical Causes:
        - Perturbation too large for the implicit function argument
        - Initial guess far from horizontal

    Args:
        message: Description of the failure
        last_residual: Residual norm at the last iterate
        iterations: Number of iterations performed
    """

    def __init__(
        self,
        message: str,
        last_residual: float | None = None,
        iterations: int | None = None,
    ) -> None:
        self.last_residual = last_residual
        self.iterations = iterations
        super().__init__(message)


class FoliationBreakdownError(NeckLabError):
    """
    Neighbouring CMC leaves intersect.

    Args:
        message: Description of the failure
        heights: Base heights of the two crossing leaves
    """

    def __init__(self, message: str, heights: tuple[float, float] | None = None) -> None:
        self.heights = heights
        super().__init__(message)


class WindowError(NeckLabError):
    """
    Sample window does not cover the range required by an epsilon-neck.

    Args:
        message: Description of the failure
        missing: Human-readable description of the missing range
    """

    def __init__(self, message: str, missing: str | None = None) -> None:
        self.missing = missing
        super().__init__(message)


class HypothesisViolationError(NeckLabError):
    """
    Trajectory violates the normalization hypotheses of the profile fit.

    Args:
        message: Description of the failure
        bound: The bound that was required
        measured: The value that was measured
    """

    def __init__(
        self,
        message: str,
        bound: float | None = None,
        measured: float | None = None,
    ) -> None:
        self.bound = bound
        self.measured = measured
        super().__init__(message)
