"""Exception hierarchy for resgraph."""


class ResgraphError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(ResgraphError):
    pass


class ParseError(ResgraphError):
    pass


class DuplicateId(ParseError):
    pass


class DanglingEdge(ParseError):
    pass


class AxiomViolation(ResgraphError):
    """A decoration axiom failed; the input is not a resolution graph."""


class NonIntegralData(ResgraphError):
    pass


class UnknownComponent(ResgraphError):
    pass


class NotAdjacent(ResgraphError):
    pass


class NotAChain(ResgraphError):
    pass


class StuckContraction(ResgraphError):
    """No contractible (-1)-curve of valency <= 2 was left in a unimodular tail."""


class InvalidCharacteristic(ResgraphError):
    pass


class InconsistentContact(ResgraphError):
    pass


class ContactBeyondBranch(InconsistentContact):
    pass


class NonMinimal(ResgraphError):
    pass
