"""Exception hierarchy.

Errors split into two families so callers (and the CLI exit codes) can tell
bad input data apart from numerical failures of an estimator.
"""


class MPTTError(ValueError):
    """Base class for all errors raised by the package."""


# -- data / input errors ------------------------------------------------------


class DataError(MPTTError):
    """The input data violates a precondition."""


class SchemaError(DataError):
    """A required CSV column is missing."""


class DuplicateYear(DataError):
    """The same calendar year appears more than once."""


class InvalidValue(DataError):
    """A cell is non-numeric, non-finite or nonpositive."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class MissingBaseYear(DataError):
    """The normalization base year is not in the panel."""


class MissingYear(DataError):
    """A requested endpoint year is not in the panel."""


class MissingBreakYear(DataError):
    """The transition year is not in the panel."""


class UndefinedRatio(DataError):
    """The money multiple is 1, so the transmission ratio is undefined."""


class InsufficientData(DataError):
    """Too few rows for the requested transform."""


class SpecError(DataError):
    """A synthetic data-generating spec is invalid."""


# -- numerical errors ---------------------------------------------------------


class NumericalError(MPTTError):
    """An estimator cannot produce a well-defined result."""


class SingularDesign(NumericalError):
    """The design matrix is rank deficient or too ill-conditioned."""


class InsufficientObservations(NumericalError):
    """Not enough observations for the number of parameters."""


class DegenerateSplit(NumericalError):
    """Too few observations on one side of the transition year."""


class EmptyScanRange(NumericalError):
    """No admissible candidate transition year in the scan window."""
