"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) so the command line
can print ``code: message`` diagnostics and map them to exit statuses.
"""

from __future__ import annotations


class TashkilError(Exception):
    """Base class for all data errors raised by the engine."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidUtf8(TashkilError):
    def __init__(self, offset: int, reason: str = "invalid UTF-8") -> None:
        self.offset = offset
        super().__init__(f"{reason} at byte {offset}")


class LeadingMark(TashkilError):
    def __init__(self, scalar: int, offset: int) -> None:
        self.scalar = scalar
        self.offset = offset
        super().__init__(f"combining mark U+{scalar:04X} has no base letter (byte {offset})")


class UnknownMark(TashkilError):
    def __init__(self, scalar: int, offset: int | None = None) -> None:
        self.scalar = scalar
        self.offset = offset
        where = "" if offset is None else f" at byte {offset}"
        super().__init__(f"U+{scalar:04X} is not in the taxonomy table{where}")


class ParseError(TashkilError):
    def __init__(self, message: str, source: str = "<string>", line: int | None = None) -> None:
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


class InconsistentEntry(ParseError):
    pass


class BadBox(ParseError):
    pass


class MissingMetrics(TashkilError):
    def __init__(self, scalar: int) -> None:
        self.scalar = scalar
        super().__init__(f"no metrics for U+{scalar:04X}")


class NoSkeletonMapping(TashkilError):
    def __init__(self, scalar: int) -> None:
        self.scalar = scalar
        super().__init__(f"U+{scalar:04X} has no entry in the rasm table")


class ConfigError(TashkilError):
    pass


class UnresolvedCollision(TashkilError):
    def __init__(self, pairs: list[tuple[int, int]]) -> None:
        self.pairs = pairs
        super().__init__(f"{len(pairs)} mark collision(s) left after the iteration cap")
