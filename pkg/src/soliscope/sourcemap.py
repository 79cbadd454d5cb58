"""Source spans and line/column bookkeeping."""

from __future__ import annotations

import bisect
from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open byte range [offset, offset+length) inside one source file."""

    file: str
    offset: int
    length: int
    line: int
    column: int

    @property
    def end(self) -> int:
        return self.offset + self.length

    def location(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"

    def cover(self, other: "Span") -> "Span":
        """Smallest span containing both self and other (same file)."""
        if other.offset < self.offset:
            first, start = other, other.offset
        else:
            first, start = self, self.offset
        end = max(self.end, other.end)
        return Span(self.file, start, end - start, first.line, first.column)

    def contains(self, other: "Span") -> bool:
        return self.offset <= other.offset and other.end <= self.end


class SourceFile:
    """One input file; resolves offsets to lines and extracts excerpts."""

    def __init__(self, name: str, text: str):
        self.name = name
        self.text = text
        self._line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(i + 1)

    def line_col(self, offset: int) -> tuple[int, int]:
        """1-based (line, column) of a byte offset."""
        line = bisect.bisect_right(self._line_starts, offset) - 1
        return line + 1, offset - self._line_starts[line] + 1

    def span(self, offset: int, length: int) -> Span:
        line, col = self.line_col(offset)
        return Span(self.name, offset, length, line, col)

    def excerpt(self, span: Span) -> str:
        """First source line covered by the span, stripped."""
        text = self.text[span.offset : span.end]
        return text.splitlines()[0].strip() if text.strip() else ""

    def line_range(self, span: Span) -> tuple[int, int, int, int]:
        """(line_start, line_end, col_start, col_end), all 1-based."""
        ls, cs = self.line_col(span.offset)
        le, ce = self.line_col(max(span.offset, span.end - 1))
        return ls, le, cs, ce + 1
