"""Exception hierarchy shared across the package.

Every violated precondition raises a subclass of :class:`DomainError`, so
callers (notably the CLI) can distinguish domain problems from genuine bugs
with a single ``except`` clause.
"""

from __future__ import annotations

__all__ = [
    "DomainError",
    "ConfigError",
    "SolveError",
    "UnlearnedError",
    "IndicatorError",
    "ParseError",
    "EvaluationError",
]


class DomainError(ValueError):
    """Base class for all precondition/domain violations raised by quorumtune."""


class ConfigError(DomainError):
    """An invalid configuration value (quorum triple, simulation, sweep, ...)."""


class SolveError(DomainError):
    """The inverse solver was asked for something its search space cannot hold."""


class UnlearnedError(DomainError):
    """A lookup was attempted on a clusterer that has not learned any samples."""


class IndicatorError(DomainError):
    """Base class for indicator-language errors."""


class ParseError(IndicatorError):
    """Malformed indicator source text.

    ``position`` is the 0-based character offset into the source at which the
    problem was detected.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


class EvaluationError(IndicatorError):
    """A well-formed program could not be evaluated (unbound variable or a
    numeric domain error such as ``log10`` of a non-positive value)."""
