"""Exception hierarchy shared by all cloakforge modules."""


class CloakforgeError(Exception):
    """Base class; the CLI maps every subclass to exit code 3."""


class InvalidArgumentError(CloakforgeError, ValueError):
    pass


class DomainError(CloakforgeError, ValueError):
    pass


class DegenerateStructureError(CloakforgeError, ArithmeticError):
    pass


class TruncationError(CloakforgeError, RuntimeError):
    """Raised when the multipole sum fails to converge below the order cap."""


class SeriesCapacityError(CloakforgeError, OverflowError):
    pass


class NotInvertibleError(CloakforgeError, ZeroDivisionError):
    pass


class WindowError(CloakforgeError, IndexError):
    """A coefficient was requested beyond the guaranteed-valid truncation order."""


class OptimizationFailedError(CloakforgeError, RuntimeError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class OutsideImageError(CloakforgeError, ValueError):
    pass


class SingularPointError(CloakforgeError, ValueError):
    pass


class NearResonanceError(CloakforgeError, ArithmeticError):
    pass


class ConfigError(CloakforgeError, ValueError):
    """Malformed configuration; the CLI maps this to exit code 2."""
