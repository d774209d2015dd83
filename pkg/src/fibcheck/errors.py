"""Exception hierarchy shared by every module."""


class FibcheckError(Exception):
    """Base class for all errors raised by the library."""


class ValidationError(FibcheckError):
    pass


class MissingComposite(ValidationError):
    pass


class NonAssociative(ValidationError):
    pass


class UnitLawViolation(ValidationError):
    pass


class DanglingId(ValidationError):
    pass


class NotAFunctor(ValidationError):
    pass


class SizeCapExceeded(FibcheckError):
    pass


class BaseMismatch(FibcheckError):
    pass


class UnknownObject(FibcheckError):
    pass


class UnknownMorphism(FibcheckError):
    pass


class BoundaryMismatch(FibcheckError):
    pass


class NotOverBase(FibcheckError):
    pass


class NotOverSource(FibcheckError):
    pass


class SquareMismatch(FibcheckError):
    pass


class PreconditionFailed(FibcheckError):
    pass


class NoInitial(PreconditionFailed):
    pass


class NoTerminal(PreconditionFailed):
    pass


class MissingLift(FibcheckError):
    pass
