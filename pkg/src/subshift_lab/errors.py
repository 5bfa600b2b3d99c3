"""Exception types shared across the toolkit."""


class SubshiftError(Exception):
    """Base class for toolkit errors."""


class HorizonUnsupported(SubshiftError):
    """A forbidden list cannot be materialized to the requested length."""


class EnumerationTooLarge(SubshiftError):
    def __init__(self, count, limit, what="language"):
        self.count = count
        self.limit = limit
        super().__init__(f"enumeration too large: |{what}| = {count} exceeds limit {limit}")


class NoLowerBound(SubshiftError):
    """No certified entropy lower bound is available."""


class SequenceBoundViolated(SubshiftError):
    """A sequence entry lies outside the declared range [0, A]."""


class PowerAlphabetTooLarge(SubshiftError):
    """The higher-power alphabet L_n cannot be enumerated within the limit."""


class MillerHypothesisFailed(SubshiftError):
    def __init__(self, series, bound, message="Miller hypothesis not satisfied"):
        self.series = series
        self.bound = bound
        super().__init__(f"{message}: series {float(series):.6g} vs bound {float(bound):.6g}")


class ExtensionStuck(SubshiftError):
    """No letter (pair) keeps the weight below 1."""


class SeriesUnbounded(SubshiftError):
    """A series over an infinite list has no tail model."""


class EmptySubshift(SubshiftError):
    """Every word is eventually forbidden."""


class ConvergenceError(SubshiftError):
    """Power iteration did not reach the requested residual."""


class ReducibleInput(SubshiftError):
    """A Parry measure was requested without selecting a component."""


class PreconditionViolated(SubshiftError):
    """Inputs do not satisfy an operation's precondition."""


class InvalidH(SubshiftError):
    """A bounded-density function h is not increasing or not subadditive."""


class InsufficientDepth(SubshiftError):
    """Coding prefixes are shorter than the requested forbidden-word length."""


class PrecisionInsufficient(SubshiftError):
    """An interval orbit straddles an interval endpoint."""
