"""Shared helpers for the plain-text file formats."""

from __future__ import annotations

from typing import Iterator


class FormatError(ValueError):
    """A malformed input file; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}:{column}: {message}")


class LineReader:
    """Iterates non-blank lines, remembering positions for error messages."""

    def __init__(self, text: str, source: str | None = None):
        self.source = source
        self._lines = [
            (no, raw.rstrip("\n"))
            for no, raw in enumerate(text.splitlines(), start=1)
            if raw.strip() and not raw.lstrip().startswith("#")
        ]
        self._pos = 0
        self.line_no = 0

    def __iter__(self) -> Iterator[str]:
        return self

    def __next__(self) -> str:
        if self._pos >= len(self._lines):
            raise StopIteration
        self.line_no, line = self._lines[self._pos]
        self._pos += 1
        return line

    def peek(self) -> str | None:
        if self._pos >= len(self._lines):
            return None
        return self._lines[self._pos][1]

    def next_line(self, what: str) -> str:
        try:
            return next(self)
        except StopIteration:
            raise self.error(f"unexpected end of input, expected {what}") from None

    def error(self, message: str, column: int = 1) -> FormatError:
        return FormatError(message, self.line_no, column, self.source)

    def ints(self, line: str, count: int, what: str) -> list[int]:
        parts = line.split()
        if len(parts) != count:
            raise self.error(f"expected {count} integers for {what}, got {len(parts)} fields")
        out = []
        col = 1
        for part in parts:
            col = line.index(part, col - 1) + 1
            try:
                out.append(int(part))
            except ValueError:
                raise self.error(f"not an integer: {part!r}", col) from None
            col += len(part)
        return out

    def header(self, keyword: str, count: int) -> list[int]:
        line = self.next_line(f"'{keyword}' header")
        parts = line.split()
        if not parts or parts[0] != keyword:
            raise self.error(f"expected header '{keyword} ...', got {line.strip()!r}")
        return self.ints(" ".join(parts[1:]), count, f"'{keyword}' header")
