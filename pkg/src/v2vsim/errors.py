"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain where the model is defined."""


class HorizonError(DomainError):
    """Time exceeds the horizon over which the linearized model stays valid."""


class DegenerateGeometryError(DomainError):
    """A terminal coincides with a cluster, so the bearing is undefined."""


class DegeneratePowerError(ArithmeticError):
    """Unnormalized path powers cannot be normalized."""


class BesselRangeError(OverflowError):
    """Argument magnitude beyond the overflow guard of the I0 evaluator."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error estimate {achieved:.3g})")
        self.achieved = achieved


class ConfigError(ValueError):
    """Invalid or unparseable simulation configuration."""


class ExportError(OSError):
    """Writing a CIR stream failed."""

    def __init__(self, message, frame_index):
        super().__init__(f"{message} (frame {frame_index})")
        self.frame_index = frame_index
