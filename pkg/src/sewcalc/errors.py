"""Exception hierarchy. Every error carries a short machine-readable code."""


class SewcalcError(Exception):
    code = "error"


class UnknownLabel(SewcalcError, LookupError):
    code = "unknown-label"

    def __init__(self, label):
        super().__init__(f"unknown brane label {label!r}")
        self.label = label


class ContextError(SewcalcError, ValueError):
    code = "bad-context"


class IllegalMove(SewcalcError, ValueError):
    code = "illegal-move"

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class NotComposable(SewcalcError, ValueError):
    code = "not-composable"

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class SaddleError(SewcalcError, ValueError):
    code = "bad-saddle"


class LoopCreated(SaddleError):
    code = "loop-created"


class FixedString(SaddleError):
    code = "fixed-string"


class ShapeError(SewcalcError, ValueError):
    code = "bad-shape"


class Disconnected(SewcalcError, ValueError):
    code = "disconnected"


class NoOutgoing(SewcalcError, ValueError):
    code = "no-outgoing"


class OddArcCount(SewcalcError, ValueError):
    code = "odd-arc-count"


class InputError(SewcalcError):
    """A problem with an input document, located by a JSON path and optionally line/column."""

    code = "input"

    def __init__(self, message, path="$", line=None, column=None, code=None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        if code is not None:
            self.code = code

    def __str__(self):
        where = self.path
        if self.line is not None:
            where += f" (line {self.line}, column {self.column})"
        return f"{self.code}: {where}: {self.message}"


class ParseError(InputError):
    code = "parse"


class SchemaError(InputError):
    code = "schema"


class SemanticError(InputError):
    code = "semantic"
