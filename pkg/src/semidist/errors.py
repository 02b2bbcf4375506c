"""Exception hierarchy shared across the package."""


class SemidistError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(SemidistError):
    """A sparse container violates a structural invariant."""


class IndexOutOfBounds(ValidationError):
    """A stored column id falls outside [0, n_cols)."""

    def __init__(self, row, column, n_cols):
        self.row = row
        self.column = column
        self.n_cols = n_cols
        super().__init__(f"row {row} stores column {column}, outside [0, {n_cols})")


class NegativeOffset(ValidationError):
    """indptr contains a negative offset."""

    def __init__(self, row, offset):
        self.row = row
        self.offset = offset
        super().__init__(f"indptr offset {offset} at row {row} is negative")


class NonMonotonicIndptr(ValidationError):
    """indptr must start at zero and be non-decreasing."""

    def __init__(self, row, message):
        self.row = row
        super().__init__(message)


class DimensionMismatch(SemidistError):
    """Operand shapes or column counts do not line up."""


class UnknownMetric(SemidistError):
    """Requested metric name is not in the catalog."""


class MissingParam(SemidistError):
    """A parameter required by the catalog entry was not supplied."""


class DomainError(SemidistError):
    """Input values lie outside the metric's domain."""


class KTooLarge(SemidistError):
    """Requested more neighbors than there are index rows."""


class SizeOverflow(SemidistError):
    """Dense materialization would exceed the configured element cap."""


class ParseError(SemidistError):
    """Input file is malformed; carries the offending line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnsupportedField(SemidistError):
    """Well-formed input uses a feature this reader does not support."""


class InvalidSpec(SemidistError):
    """Synthetic dataset specification is inconsistent."""
