"""
Exception types raised across the source-localization pipeline.
"""
from typing import Optional


class SourceLocatorError(Exception):
    """Base class for pipeline errors."""


class CascadeFormatError(SourceLocatorError, ValueError):
    """A cascade, network or ranking file could not be parsed."""

    def __init__(self, reason: str, path: str = "<input>", line: int = 0, column: int = 0):
        self.reason = reason
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {reason}")


class NoObservableNodesError(SourceLocatorError, ValueError):
    """An observation regime left no node to observe."""


class EmptyCandidateSetError(SourceLocatorError, ValueError):
    """Every network node is observed in some cascade of the set."""


class InadmissibleCandidateError(SourceLocatorError, ValueError):
    """A candidate cannot reach every observed node of a cascade."""

    def __init__(self, candidate: int, cascade_id: Optional[str] = None):
        self.candidate = candidate
        self.cascade_id = cascade_id
        where = f" in cascade {cascade_id!r}" if cascade_id else ""
        super().__init__(f"candidate {candidate} cannot reach every observed node{where}")


class DegenerateLikelihoodError(SourceLocatorError, ArithmeticError):
    """The log-likelihood is -inf, so its gradient is undefined."""
