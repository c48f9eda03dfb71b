"""Exception hierarchy.

Every error carries an optional ``witness`` (the offending basis triple,
pair, relation, ...) so callers and the CLI can report it.
"""


class CochainError(Exception):
    """Base class for all errors raised by the package."""

    #: CLI exit code used when the error reaches the command line.
    exit_code = 4

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(CochainError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc, witness=(line, column))
        self.line = line
        self.column = column


class BudgetExceeded(CochainError):
    exit_code = 3


class NotAComplex(CochainError):
    pass


class BaseMismatch(CochainError):
    pass


class NotSurjective(CochainError):
    pass


class NotAssociative(CochainError):
    pass


class NoUnit(CochainError):
    pass


class CoefficientsNotAlgebra(CochainError):
    pass


class NotACocycle(CochainError):
    pass


class NoSplitting(CochainError):
    pass


class PeifferViolation(CochainError):
    pass


class NotSplit(CochainError):
    pass


class NoSolution(CochainError):
    pass


class UnknownKind(CochainError):
    pass


class NotQuasiFree(CochainError):
    pass


class InsufficientDegreeBound(CochainError):
    pass


class NotAcyclicFibration(CochainError):
    pass


class LiftFailure(CochainError):
    pass


class StrategyUnavailable(CochainError):
    pass


class NoPreimage(CochainError):
    pass


class GroundNotOverField(CochainError):
    pass


class NotAPair(CochainError):
    pass
