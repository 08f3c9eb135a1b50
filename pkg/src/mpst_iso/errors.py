"""Exception hierarchy shared by all modules."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column range plus 0-based character offsets."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int
    start_offset: int = 0
    end_offset: int = 0

    def __str__(self) -> str:
        return f"{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"


class MPSTError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MPSTError):
    def __init__(self, message: str, span: SourceSpan | None = None, expected: list[str] | None = None):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = expected or []

    def __str__(self) -> str:
        loc = f"{self.span}: " if self.span else ""
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{loc}{self.message}{exp}"


class WellFormednessError(MPSTError):
    """A formation rule is violated; ``span`` is set when raised by the parser."""

    rule = ""

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        loc = f"{self.span}: " if self.span else ""
        return f"{loc}{type(self).__name__}: {self.message}"


class DuplicateLabel(WellFormednessError):
    rule = "Labels"


class SelfCommunication(WellFormednessError):
    rule = "Global Prefix"


class UnboundRecVar(WellFormednessError):
    rule = "Recursion"


class UnguardedRecursion(WellFormednessError):
    rule = "Recursion"


class IndexOutOfChain(MPSTError, IndexError):
    """A prefix position beyond the leading chain of value prefixes."""


class Unmergeable(MPSTError):
    """Projection or merge failed because two local types are not mergeable."""

    def __init__(self, failure):
        self.failure = failure
        super().__init__(str(failure))


@dataclass(frozen=True)
class ProjectionFailure:
    """Where and why a merge failed: the branch path and the offending pair."""

    left: object
    right: object
    path: tuple[int, ...] = field(default=())
    participant: str | None = None

    def __str__(self) -> str:
        who = f" onto {self.participant}" if self.participant else ""
        return f"cannot merge{who} at path {list(self.path)}: {self.left}  vs  {self.right}"
