"""Exception hierarchy shared by the parsers, the model and the engine."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourcePosition:
    line: int
    column: int
    byte_offset: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"

    @classmethod
    def from_offset(cls, text: str, offset: int) -> "SourcePosition":
        """Position of character ``offset`` in ``text`` (line and column are 1-based)."""
        offset = max(0, min(offset, len(text)))
        line = text.count("\n", 0, offset) + 1
        line_start = text.rfind("\n", 0, offset) + 1
        return cls(line, offset - line_start + 1, len(text[:offset].encode("utf-8")))


class RdfStarError(Exception):
    """Base class for every error raised by this package."""


class TokenizeError(RdfStarError):
    """Raised by the lexers. Carries a character offset, not a position."""

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.message = message
        self.offset = offset


class ParseError(RdfStarError):
    def __init__(self, message: str, position: SourcePosition | None = None):
        self.message = message
        self.position = position
        if position is not None:
            message = f"line {position.line}, column {position.column}: {message}"
        super().__init__(message)


class TurtleSyntaxError(ParseError):
    pass


class QuerySyntaxError(ParseError):
    pass


class UnsupportedFeatureError(QuerySyntaxError):
    """The query uses SPARQL syntax outside the supported fragment."""


class UnknownPrefixError(ParseError):
    pass


class NestingDepthError(RdfStarError):
    def __init__(self, depth: int, limit: int, position: SourcePosition | None = None):
        self.depth = depth
        self.limit = limit
        self.position = position
        msg = f"nesting depth {depth} exceeds the limit of {limit}"
        if position is not None:
            msg = f"line {position.line}, column {position.column}: {msg}"
        super().__init__(msg)


class PatternError(RdfStarError, ValueError):
    """Invalid triple* pattern, e.g. a blank node inside an embedded pattern."""


class IncompatibleMappingsError(RdfStarError, ValueError):
    pass


class AssignmentError(RdfStarError, KeyError):
    """An embedded triple has no blank node in the assignment."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing bnode assignment"


@dataclass(frozen=True)
class ScopeViolation:
    variable: str
    position: SourcePosition | None
    message: str


class ScopeError(QuerySyntaxError):
    def __init__(self, violations: list[ScopeViolation]):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__("; ".join(v.message for v in self.violations), first.position)
