"""Exception hierarchy shared by every module."""


class ProdcohError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class NonPrime(ProdcohError):
    pass


class ReduciblePolynomial(ProdcohError):
    pass


class UnsupportedSize(ProdcohError):
    pass


class DimensionMismatch(ProdcohError):
    pass


class Mismatch(ProdcohError):
    pass


class NotLatinSquare(ProdcohError):
    pass


class NonAssociative(ProdcohError):
    pass


class NoIdentity(ProdcohError):
    pass


class UnknownPreset(ProdcohError):
    pass


class UnsupportedGroup(ProdcohError):
    pass


class NotGStable(ProdcohError):
    pass


class NotAChainMap(ProdcohError):
    pass


class TruncationUnderflow(ProdcohError):
    pass


class BudgetExceeded(ProdcohError):
    """Raised when a construction would exceed the configured memory budget (exit 3)."""


class PreconditionViolated(ProdcohError):
    pass


class ZeroClass(ProdcohError):
    pass


class WrongCharacteristic(ProdcohError):
    pass


class ProductsNonzero(ProdcohError):
    pass


class HomotopySearchFailed(ProdcohError):
    pass


class ObstructionNonzero(ProdcohError):
    pass


class NotMinimal(ProdcohError):
    pass


class NonHomogeneous(ProdcohError):
    pass


class UnknownGenerator(ProdcohError):
    pass


class ParseError(ProdcohError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)
