"""Exception types raised by the package."""


class InvalidDimensionError(ValueError):
    """A matrix or channel dimension is out of range."""


class InvalidArgumentError(ValueError):
    """Inputs have incompatible shapes or values."""


class ConfigValidationError(ValueError):
    """A model or run parameter violates its constraints."""


class ConfigParseError(ValueError):
    """A configuration document does not follow the expected schema."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class NumericalFailureError(ArithmeticError):
    """A dense linear-algebra routine failed to converge or produced garbage."""


class ResourceLimitError(RuntimeError):
    """The requested enumeration is too large to carry out."""


class ClosureError(RuntimeError):
    """Lie closure did not stabilise; indicates a tolerance bug."""


class EmptyIntervalError(ValueError):
    """The interaction length is not below the critical length.

    The critical length is available as ``ell_c`` so callers can retry.
    """

    def __init__(self, ell, ell_c):
        super().__init__(
            f"no energy interval: ell={ell!r} is not below ell_c={ell_c!r}")
        self.ell = ell
        self.ell_c = ell_c
