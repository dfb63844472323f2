"""Exception types shared across the package."""


class ExflowError(Exception):
    """Base class for package errors."""


class GridMismatchError(ExflowError, ValueError):
    """Two fields that must share a grid do not."""


class SizeMismatchError(ExflowError, ValueError):
    """Sample array does not match the grid size."""


class DivergenceError(ExflowError, RuntimeError):
    """A time integration produced non-finite values or a collapsed step."""


class RetractionError(ExflowError, RuntimeError):
    """The constraint retraction could not reach the requested tolerance."""


class FeasibilityError(ExflowError, ValueError):
    """Requested constraint values violate a feasibility bound."""


class UnknownKeyError(ExflowError, ValueError):
    """A configuration key is not recognized."""

    def __init__(self, key: str, context: str = ""):
        self.key = key
        msg = f"unknown configuration key: {key!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)
