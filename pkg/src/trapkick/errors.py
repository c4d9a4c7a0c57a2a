"""Exception types shared across the package."""


class TrapkickError(Exception):
    """Base class for all package errors."""


class DimensionError(TrapkickError):
    """Arithmetic or conversion attempted between incompatible dimensions."""

    def __init__(self, message, dim_left=None, dim_right=None):
        super().__init__(message)
        self.dim_left = dim_left
        self.dim_right = dim_right


class ConfigError(TrapkickError):
    """Invalid or incomplete configuration (bad value, missing field, unknown key)."""


class QuadratureError(TrapkickError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the partial estimate and the achieved error so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message, partial=None, abserr=None):
        super().__init__(message)
        self.partial = partial
        self.abserr = abserr


class IntegrationError(TrapkickError):
    """ODE integration failed (step-size underflow or step budget exhausted)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoSensitivityError(TrapkickError):
    """Rate at unit charge is zero: the configuration is kinematically dead."""
