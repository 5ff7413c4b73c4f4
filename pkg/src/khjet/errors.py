"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data/format
problems exit 2, numerical failures exit 3.
"""


class KhjetError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(KhjetError, ValueError):
    """Array shapes or grids do not conform."""


class InsufficientDataError(KhjetError, ValueError):
    """Too few snapshots/fields for the requested operation."""


class UnknownPresetError(KhjetError, ValueError):
    """Requested jet case id does not exist."""


class ContractError(KhjetError, ValueError):
    """An input violates a documented precondition (range, sign, symmetry)."""


class FormatError(KhjetError):
    """A file does not conform to its on-disk format.

    Carries the byte offset at which the problem was detected.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class NumericalError(KhjetError):
    """An iterative kernel failed to converge or produced invalid results."""


class SingularMatrixError(NumericalError):
    """A triangular factor has a pivot below the rank tolerance."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DivergenceError(NumericalError):
    """The time integration produced non-finite values."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index
