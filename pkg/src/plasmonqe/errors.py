"""Exception types shared across the package."""


class PlasmonQEError(Exception):
    """Base class for all package-specific errors."""


class DomainError(PlasmonQEError, ValueError):
    """An input lies outside the mathematical domain of an operation
    (e.g. evaluating an outgoing wave at its own origin, or a field
    point inside a sphere)."""


class RangeError(PlasmonQEError, ArithmeticError):
    """A special-function evaluation left the representable floating
    range (overflow).  Raised instead of silently returning inf/NaN."""


class MaterialRangeError(PlasmonQEError, ValueError):
    """A tabulated material was queried outside its tabulated frequency
    range.  No extrapolation is performed."""

    def __init__(self, omega, omega_min, omega_max):
        self.omega = omega
        self.omega_min = omega_min
        self.omega_max = omega_max
        super().__init__(
            f"omega = {omega:.6g} rad/s outside tabulated range "
            f"[{omega_min:.6g}, {omega_max:.6g}] rad/s"
        )


class SolverConditionError(PlasmonQEError, RuntimeError):
    """The multiple-scattering linear system is singular or badly
    conditioned.  Carries the reciprocal-condition estimate."""

    def __init__(self, condition_estimate, threshold):
        self.condition_estimate = condition_estimate
        self.threshold = threshold
        super().__init__(
            f"linear system condition estimate {condition_estimate:.3e} "
            f"exceeds threshold {threshold:.3e}"
        )


class NoPeakError(PlasmonQEError, ValueError):
    """The requested window of a sweep contains no local maximum."""


class PoorFitError(PlasmonQEError, RuntimeError):
    """A resonance fit failed badly.  Carries the relative residual."""

    def __init__(self, residual, threshold):
        self.residual = residual
        self.threshold = threshold
        super().__init__(
            f"resonance fit residual {residual:.3g} exceeds hard threshold "
            f"{threshold:.3g}"
        )


class OverdampedRegimeError(PlasmonQEError, ValueError):
    """Closed-form oscillatory amplitudes were requested outside the
    oscillatory regime (g*Omega^2 <= linewidth^2)."""


class WeakCouplingError(PlasmonQEError, RuntimeError):
    """Dynamics were requested for a resonance that is not strongly
    coupled.  Carries the Rabi-to-linewidth ratio."""

    def __init__(self, ratio, threshold):
        self.ratio = ratio
        self.threshold = threshold
        super().__init__(
            f"coupling is weak: Omega/delta_omega_m = {ratio:.3g} < {threshold:.3g}"
        )


class SceneValidationError(PlasmonQEError, ValueError):
    """A scene file violated an invariant.  The message names the
    offending entity."""
