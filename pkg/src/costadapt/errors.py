"""Exception hierarchy shared across the package.

The split into data vs. numeric errors mirrors the CLI exit codes
(2 for data problems, 3 for numeric ones).
"""


class CostAdaptError(Exception):
    """Base class for all package errors."""


class DataError(CostAdaptError):
    """Bad input data: files, payloads, dimensions, labels."""


class DimensionMismatchError(DataError):
    """Vector or model dimensions disagree."""


class FormatError(DataError):
    """A file or document does not follow its declared format."""


class NumericError(CostAdaptError):
    """A numeric precondition failed (non-finite value, degenerate input)."""


class ZeroVectorError(NumericError):
    """An all-zero feature vector where a positive squared norm is required."""
