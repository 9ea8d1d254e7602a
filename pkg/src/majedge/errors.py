"""Exception hierarchy.

Everything raised on purpose by the package derives from ``MajorityError``.
Precondition failures (bad input, unmet degree thresholds, exhausted budgets)
derive from ``PreconditionError`` so the CLI can map them to one exit code.
"""

from __future__ import annotations


class MajorityError(Exception):
    """Base class for all package errors."""


class PreconditionError(MajorityError, ValueError):
    """Input violates an operation's precondition."""


# graph-core
class SelfLoop(PreconditionError):
    pass


class ParallelEdge(PreconditionError):
    pass


class EmptyInput(PreconditionError):
    pass


class MissingTolerance(PreconditionError):
    def __init__(self, colour):
        super().__init__(f"no tolerance for colour {colour!r}")
        self.colour = colour


class PartialColouring(PreconditionError):
    pass


class PaletteMismatch(PreconditionError):
    pass


class InvalidList(PreconditionError):
    pass


# transform
class DegreeTooSmall(PreconditionError):
    pass


class OddDegree(PreconditionError):
    pass


class TraceMismatch(PreconditionError):
    pass


# bipartite-color
class NotBipartite(PreconditionError):
    pass


class ListTooShort(PreconditionError):
    pass


class ListTooLong(PreconditionError):
    pass


class PreferenceClash(PreconditionError):
    pass


# pipeline
class PreconditionDegree(PreconditionError):
    pass


class InvalidTolerance(PreconditionError):
    pass


class NotExcessive(PreconditionError):
    pass


class NotRegular(PreconditionError):
    pass


class PostVerificationFailed(MajorityError):
    """A driver produced a colouring that failed the exact verifier."""

    def __init__(self, report, message="post-verification failed"):
        super().__init__(f"{message}: {len(report.violations)} violation(s)")
        self.report = report


# stochastic
class EpsilonOutOfRange(PreconditionError):
    pass


class VectorNotExcessive(PreconditionError):
    pass


class ParamOutOfRange(PreconditionError):
    pass


class EmptyDistribution(PreconditionError):
    pass


class RoundLimitExceeded(MajorityError):
    def __init__(self, log):
        super().__init__(f"no valid colouring after {log.rounds} resampling rounds")
        self.log = log


# oracle
class BudgetExceeded(PreconditionError):
    pass


class BetaTooLarge(PreconditionError):
    pass


class InvalidProbabilities(PreconditionError):
    pass


# generators
class InfeasibleParams(PreconditionError):
    pass


class FormatError(MajorityError, ValueError):
    """Malformed instance file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
