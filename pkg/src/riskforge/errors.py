"""Exception and warning types shared across the toolkit.

Each error class maps to one failure mode named in the public contracts, so
callers (and the CLI's exit-code table) can dispatch on type rather than on
message text.
"""

from __future__ import annotations


class RiskforgeError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class SchemaError(RiskforgeError):
    """Invalid schema declaration or schema file."""

    exit_code = 3


class MissingColumnError(RiskforgeError):
    """A schema-declared column is absent from the CSV header."""

    exit_code = 4


class CellValueError(RiskforgeError):
    """A cell could not be parsed under the declared feature type."""

    exit_code = 4

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyDatasetError(RiskforgeError):
    """The source contained a header but zero data rows."""

    exit_code = 4


class AllMissingColumnError(RiskforgeError):
    """A column has zero observed (non-missing) values, so it cannot be imputed."""

    exit_code = 4


class DegenerateSplitError(RiskforgeError):
    """A stratified split would leave some class empty in one part."""

    exit_code = 5


class UnknownFeatureError(RiskforgeError):
    """A feature name is not declared in the schema."""

    exit_code = 3


class UnknownColumnError(RiskforgeError):
    """A text column name is not declared in the schema."""

    exit_code = 3


class NotCategoricalError(RiskforgeError):
    """Operation requires a categorical feature."""

    exit_code = 3


class TooFewRowsError(RiskforgeError):
    """Operation requires more rows than the dataset has."""

    exit_code = 4


class SingleClassError(RiskforgeError):
    """Operation requires both label classes to be present."""

    exit_code = 5


class SchemaMismatchError(RiskforgeError):
    """Two inputs that must share a schema do not."""

    exit_code = 3


class DegenerateDataError(RiskforgeError):
    """Training data admits no split at all and no usable fallback."""

    exit_code = 5


class NonFiniteLossError(RiskforgeError):
    """Boosting diverged; carries the round at which the loss left the finite range."""

    exit_code = 5

    def __init__(self, message: str, round_index: int):
        super().__init__(message)
        self.round_index = round_index


class UnsupportedModelError(RiskforgeError):
    """The model family does not support the requested operation."""

    exit_code = 3


class TooManyFeaturesError(RiskforgeError):
    """Brute-force attribution guard: 2^k enumeration would be too large."""

    exit_code = 5


class VersionMismatchError(RiskforgeError):
    """A persisted document declares an unsupported format version."""

    exit_code = 6


class FingerprintMismatchError(RiskforgeError):
    """A model artifact was trained against a different schema."""

    exit_code = 6


class MissingInputError(RiskforgeError):
    """A required input file does not exist."""

    exit_code = 2


class ZeroVarianceWarning(UserWarning):
    """A numeric column is constant; standardization fell back to centering."""


class DegenerateDataWarning(UserWarning):
    """Training rows are identical with mixed labels; model collapsed to one leaf."""


class ConstantColumnWarning(UserWarning):
    """A constant column was assigned zero correlation by policy."""


class NonConvergenceWarning(UserWarning):
    """An iterative trainer hit its epoch budget before reaching tolerance."""
