"""Exception types shared across the package."""


class StochdomError(ValueError):
    """Base class for invalid inputs rejected by the library."""


class ZeroPolynomial(StochdomError):
    pass


class DistributionError(StochdomError):
    pass


class MassNotOne(DistributionError):
    pass


class NegativeProbability(DistributionError):
    pass


class EmptyDistribution(DistributionError):
    pass


class ZeroScale(DistributionError):
    pass


class SupportOutsideInterval(StochdomError):
    """A distribution has an atom outside the reference interval."""


class BadInterval(StochdomError):
    pass


class OrderTooSmall(StochdomError):
    pass


class BadDegrees(StochdomError):
    """The number of matched moments ``m`` is not in ``0..n-1``."""


class EpsilonOutOfRange(StochdomError):
    pass


class MOutOfRange(StochdomError):
    pass


class RatioTooSmall(StochdomError):
    pass


class MeansNotOrdered(StochdomError):
    pass
