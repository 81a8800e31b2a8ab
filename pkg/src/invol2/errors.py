"""Exception hierarchy shared by every module of the package."""


class Invol2Error(Exception):
    """Base class for all library errors."""


class DivisionByZero(Invol2Error, ZeroDivisionError):
    pass


class DegreeOverflow(Invol2Error):
    """A reduced rational function exceeded the context's degree budget."""


class AlreadySquare(Invol2Error):
    pass


class VerificationError(Invol2Error):
    """An internal re-verification of a computed witness failed.

    Raised instead of returning a result that did not survive its own
    exact re-check; seeing one means a bug, not bad input.
    """


class ZeroBeta(Invol2Error):
    pass


class AlgebraContractError(Invol2Error):
    pass


class InvolutionContractError(Invol2Error):
    pass


class NotMatrixAlgebra(Invol2Error):
    pass


class ZeroEntry(Invol2Error):
    pass


class NonSymmetricEntry(Invol2Error):
    pass


class NonUnitEntry(Invol2Error):
    pass


class AltNotLine(Invol2Error):
    pass


class SymplecticFactor(Invol2Error):
    pass


class NotSubalgebra(Invol2Error):
    pass


class BadChoice(Invol2Error):
    pass


class WrongShape(Invol2Error):
    pass


class IterationCapExceeded(Invol2Error):
    pass


class NotIsotropic(Invol2Error):
    pass


class SquareInput(Invol2Error):
    pass


class SearchExhausted(Invol2Error):
    pass


class ParseError(Invol2Error, ValueError):
    pass
