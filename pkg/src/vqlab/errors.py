"""Exception types shared across the package.

The CLI maps these onto exit codes, so new error conditions should reuse one
of the classes below rather than raising bare ValueError.
"""


class ConfigurationError(ValueError):
    """A parameter, spec field, or argument combination is invalid."""


class DegenerateInputError(ValueError):
    """Numerically unusable input, e.g. a zero-norm vector offered for embedding."""


class DataFormatError(ValueError):
    """A data file failed to parse. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UndefinedDivergenceError(ValueError):
    """KL divergence is undefined: p has mass on a bin where q is zero."""


class TrainingDivergedError(RuntimeError):
    """A loss or gradient became non-finite during training."""
