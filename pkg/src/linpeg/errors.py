class LpegError(Exception):
    """Base class for errors raised by linpeg."""


class GrammarError(LpegError):
    """Malformed grammar text or an inconsistent grammar value."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class NotLpegError(LpegError):
    def __init__(self, judgement):
        lines = [f"{v.rule} {list(v.path)}: {v.text} ({v.reason})" for v in judgement.violations]
        super().__init__("grammar is not an LPEG:\n  " + "\n  ".join(lines))
        self.judgement = judgement


class IllFormedError(LpegError):
    def __init__(self, diagnostics):
        super().__init__("grammar is not well-formed:\n  " + "\n  ".join(diagnostics))
        self.diagnostics = diagnostics


class RecursionDepthExceeded(LpegError):
    """The interpreter's depth guard tripped; the grammar escaped the well-formedness check."""


class ResourceLimitExceeded(LpegError):
    """A configurable budget (DFA states, expression size, ...) was exhausted."""


class ConversionError(LpegError):
    """Internal inconsistency in the LPEG to automaton pipeline."""
