"""Exception types raised by skewmax.

The CLI maps these onto exit codes: domain and MDA errors exit with 2,
infeasible parameter regimes exit with 3.
"""


class SkewmaxError(Exception):
    """Base class for all library errors."""


class DomainError(SkewmaxError, ValueError):
    """An argument lies outside the domain of the requested function."""


class WrongMdaError(SkewmaxError, ValueError):
    """The radius law belongs to the other max-domain of attraction."""


class UnclassifiableError(SkewmaxError, ValueError):
    """A tabulated law was used where an MDA classification is required."""


class InfeasibleError(SkewmaxError, ValueError):
    """The (lambda, n) combination forces a correlation outside (0, 1]."""
