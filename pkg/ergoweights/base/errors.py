"""Exceptions raised by ergoweights.

Every error is a ``ValueError`` so that callers written against plain
parameter validation keep working.
"""


class SpecValidationError(ValueError):
    """Invalid transformation or weight specification

    Parameters
    ----------
    field : `str`
        Name of the offending field
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__("``%s`` %s" % (field, message))


class SingularEvaluationError(ValueError):
    """A weight evaluated to 0 or to a non-finite value at sample ``index``
    """

    def __init__(self, index, message):
        self.index = index
        super().__init__("sample point %d: %s" % (index, message))


class SampleValidationError(ValueError):
    """Malformed or invalid sample, ``row`` is None when not row specific
    """

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = "row %d: %s" % (row, message)
        super().__init__(message)


class ParameterError(ValueError):
    pass


class CannotSplitError(ValueError):
    pass


class ThresholdError(ValueError):
    pass


class UnsupportedModeError(ValueError):
    pass


class DependencyError(ValueError):
    """Prerequisite class reports are missing
    """

    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("missing prerequisite reports: %s"
                         % ", ".join(self.missing))


class OracleSizeError(ValueError):
    pass
