"""Exception hierarchy shared by all bound computations."""


class BoundError(ValueError):
    """Base class for invalid inputs to any bound computation."""


class NonPositiveDeviation(BoundError):
    pass


class BothInfinite(BoundError):
    pass


class NonPositiveMoment(BoundError):
    pass


class NotCanonical(BoundError):
    """Raised when an operation requiring u <= v receives u > v."""


class DomainError(BoundError):
    pass


class InvalidMixture(BoundError):
    pass


class InvalidWeight(BoundError):
    pass


class QuadratureFailure(ArithmeticError):
    """Adaptive quadrature did not reach its tolerance within budget."""


class WeightNotPositiveOnInterval(BoundError):
    pass


class DegenerateWeight(BoundError):
    pass


class ZeroDenominator(BoundError):
    pass


class InvalidWeightFunction(BoundError):
    """Weight function is negative or decreasing somewhere on its sampled grid."""


class InvalidInstance(BoundError):
    """A Volkov instance violates the inequality's preconditions."""


class HorizonHit(RuntimeError):
    """The oracle's best atom sits at the edge of its search box."""
