"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so every precondition failure should
raise a subclass of :class:`PreconditionError`.
"""
from __future__ import annotations


class CliqueLabError(Exception):
    """Base class for all errors raised by cliquelab."""


class PreconditionError(CliqueLabError, ValueError):
    """An operation was called with inputs outside its contract."""


class ParseError(PreconditionError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class SelfLoopError(PreconditionError):
    pass


class VertexRangeError(PreconditionError, IndexError):
    pass


class DomainError(PreconditionError):
    pass


class ConstructionRefused(PreconditionError):
    """A generator refused its input; ``witness`` carries the offending object."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class RetryBudgetExhausted(CliqueLabError):
    """A randomized procedure ran out of retries; ``best`` holds the best attempt."""

    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)
