"""Exception hierarchy shared by the library and the command line."""


class CoxRingError(Exception):
    """Base class for every error raised by coxring."""


class ValidationError(CoxRingError, ValueError):
    """Input data is malformed or violates a precondition (exit code 1)."""


class ParseError(ValidationError):
    """Syntax error in a document or in a polynomial string.

    Parameters
    ----------
    message: str
        What went wrong
    line, column: int or None
        1-based position of the offending token, when known
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = 'line {}, column {}: {}'.format(line, column, message)
        super(ParseError, self).__init__(message)


class UnresolvedReferenceError(ValidationError):
    """A document entry refers to a name that is not defined."""


class HomogeneityError(ValidationError):
    """A polynomial has terms of different degrees.

    ``degrees`` maps each offending monomial (as a string) to its degree.
    """

    def __init__(self, message, degrees=None):
        self.degrees = degrees or {}
        super(HomogeneityError, self).__init__(message)


class NotPointedError(ValidationError):
    """A grading admits a nonzero nonnegative vector of degree zero."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super(NotPointedError, self).__init__(message)


class UnboundedFiberError(ValidationError):
    """A degree fiber is infinite and no cap was supplied."""


class ParameterizationError(ValidationError):
    """A parameter tuple projects to the zero vector."""


class CocycleError(ValidationError):
    """A cocycle does not satisfy the cocycle condition."""


class ComputationAborted(CoxRingError, RuntimeError):
    """A computation was stopped by a safety limit (exit code 2)."""


class BoundExceededError(ComputationAborted):
    """The total-degree safety cap was reached."""
