"""Exception types shared across the toolkit."""


class GreycastError(Exception):
    """Base class for every error raised by this package."""


class DatasetError(GreycastError):
    """Input CSV is malformed; the message names the offending line."""


class ModelFileError(GreycastError):
    """Persisted model document is missing fields or carries bad values."""


class TooFewSamples(GreycastError):
    """Grey modelling needs at least four samples."""


class SingularDesign(GreycastError):
    """Normal equations are numerically singular (degenerate data)."""


class DevelopmentCoefficientOutOfRange(GreycastError):
    """|a| >= 2, so the optimised-parameter log transform is undefined."""


class ZeroDevelopmentCoefficient(GreycastError):
    """a == 0, so the optimised-parameter transform divides by zero."""


class VariantOrderConflict(GreycastError):
    """A fractional order other than 1 was supplied to an order-locked variant."""


class ZeroObserved(GreycastError):
    """Percentage metrics are undefined when an observed value is exactly 0."""


class LengthMismatch(GreycastError):
    """Observed and predicted series differ in length."""


class NoFeasibleOrder(GreycastError):
    """Every candidate order in the search grid failed to fit."""
