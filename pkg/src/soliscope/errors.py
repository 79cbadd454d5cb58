"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations

from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from soliscope.sourcemap import Span


class SoliscopeError(Exception):
    """Base class for all diagnosable failures.

    Carries an optional source span so the CLI can point at the offending
    code instead of dumping a traceback.
    """

    def __init__(self, message: str, span: Optional["Span"] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span.location()}: {self.message}"
        return self.message


class LexicalError(SoliscopeError):
    """Unterminated string/comment or an illegal character."""


class ParseError(SoliscopeError):
    """Token stream does not match the supported grammar."""


class ResolutionError(SoliscopeError):
    """Unresolvable name, base contract, or inconsistent hierarchy."""


class LoweringError(SoliscopeError):
    """Expression uses a construct the IR cannot represent."""


class AnalysisError(SoliscopeError):
    """Internal analysis invariant broken; should not escape the pipeline."""
