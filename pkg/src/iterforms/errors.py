"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class IterFormsError(Exception):
    exit_code = 1
    kind = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self) -> dict:
        return {"error": {"type": self.kind, "message": self.message, "exit_code": self.exit_code,
                          **self.details}}


class UsageError(IterFormsError):
    kind = "usage"


class ChartMismatchError(UsageError):
    kind = "chart_mismatch"


class DegreeError(UsageError):
    kind = "degree"


class SlotError(UsageError):
    kind = "slot"


class ParseError(UsageError):
    kind = "parse"

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class WindowError(UsageError):
    """A verification window is not closed under the differential, or too small."""

    kind = "window"


class NotClosedError(UsageError):
    kind = "not_closed"


class ResourceLimitError(IterFormsError):
    exit_code = 2
    kind = "resource_limit"


class InvariantViolation(IterFormsError):
    exit_code = 3
    kind = "invariant"
