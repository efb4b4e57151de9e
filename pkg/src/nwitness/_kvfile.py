"""Minimal ``key = value`` text format shared by config and mixture files.

Blank lines and ``#`` comments are ignored.  Values are kept as raw strings;
callers decode them and report problems through :func:`fail`.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError


def read_pairs(text: str, source=None) -> list[tuple[int, str, str]]:
    """Return ``(line_number, key, raw_value)`` triples in file order."""
    pairs = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=lineno, source=source)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError("empty key", line=lineno, source=source)
        if key in seen:
            raise ParseError(
                f"duplicate key (first defined on line {seen[key]})",
                line=lineno, key=key, source=source,
            )
        seen[key] = lineno
        pairs.append((lineno, key, value))
    return pairs


def read_file(path) -> list[tuple[int, str, str]]:
    path = Path(path)
    return read_pairs(path.read_text(), source=path)
