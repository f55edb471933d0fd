"""Exception types raised by the engine."""


class AlgebraError(Exception):
    """Base class for all errors raised by :mod:`thickenings`."""


class RingMismatch(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


class NotHomogeneous(AlgebraError):
    pass


class NotGradable(AlgebraError):
    pass


class InvalidExponent(AlgebraError):
    pass


class InvalidInput(AlgebraError):
    pass


class UnknownExample(AlgebraError):
    pass


class NotNested(AlgebraError):
    pass


class NotInImage(AlgebraError):
    """A vector that was expected to lie in the image of a map does not."""


class InvariantViolation(AlgebraError):
    """An internal consistency check failed. Never expected on valid input."""


class BudgetExceeded(AlgebraError):
    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class ParseError(AlgebraError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
