class HypergiantError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HypergiantError, ValueError):
    """An argument is outside the accepted range or malformed."""


class DomainError(HypergiantError, ValueError):
    """A closed-form quantity is undefined for the given parameters."""


class StatisticsError(HypergiantError, ValueError):
    """Not enough (or degenerate) data to compute a statistic."""


class HGFormatError(ParameterError):
    """A ``.hg`` file violates the text format."""
