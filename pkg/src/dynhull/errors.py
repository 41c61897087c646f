"""Exception types raised across the package."""


class DimensionMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class NonExactDivision(ArithmeticError):
    """An exact division left a nonzero remainder.

    Inside the dynamic adjoint update this means an upstream invariant is
    broken (for instance a singular update was committed), so callers should
    let it propagate.
    """

    def __init__(self, a, b):
        super().__init__(f"{a} is not divisible by {b}")
        self.dividend = a
        self.divisor = b


class SingularMatrix(ArithmeticError):
    pass


class SingularUpdate(ArithmeticError):
    """A column replacement would make the maintained matrix singular."""


class DegenerateInput(ValueError):
    """The pointset violates general position."""


class TooFewPoints(ValueError):
    pass


class CacheMiss(KeyError):
    """A ridge was queried that is not on the current hull boundary."""


class DegenerateQuery(ValueError):
    """A query point could not be certified inside or outside any cell."""
