"""Exception types shared across the package."""


class HyperdetError(Exception):
    """Base class for every error raised by this package."""


class SpecMismatch(HyperdetError, ValueError):
    """Operands live in different rings."""


class ShapeMismatch(HyperdetError, ValueError):
    pass


class IndexOutOfBounds(HyperdetError, IndexError):
    pass


class BudgetExceeded(HyperdetError):
    """A computation would exceed its configured term/state budget."""

    def __init__(self, what, needed, budget):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed}, budget is {budget}")


class OddOrder(HyperdetError, ValueError):
    """The identity used requires an even tensor order."""


class SupportViolation(HyperdetError, ValueError):
    pass


class UnsupportedRing(HyperdetError, ValueError):
    pass


class HypothesisNotMet(HyperdetError, ValueError):
    pass


class CycleDetected(HyperdetError, ValueError):
    pass


class DisconnectedPoset(HyperdetError, ValueError):
    pass


class NotEchelon(HyperdetError, ValueError):
    pass


class NumericalFailure(HyperdetError, ArithmeticError):
    pass


class ParseError(HyperdetError, ValueError):
    """Malformed ring descriptor, value, or input file."""
