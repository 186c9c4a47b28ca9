"""Structured errors: every user-facing failure is a Diagnostic with a
source span, an error class, and (for mismatches) normalized
expected/actual payloads."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .syntax import Span

UNBOUND_NAME = "UnboundName"
TYPE_MISMATCH = "TypeMismatch"
UNIVERSE_ERROR = "UniverseError"
NOT_A_FUNCTION = "NotAFunction"
NOT_A_PAIR = "NotAPair"
INVALID_HIT = "InvalidHit"
UNSOLVED_HOLE = "UnsolvedHole"
IMPORT_CYCLE = "ImportCycle"
PARSE_ERROR = "ParseError"

ERROR_CLASSES = {
    UNBOUND_NAME,
    TYPE_MISMATCH,
    UNIVERSE_ERROR,
    NOT_A_FUNCTION,
    NOT_A_PAIR,
    INVALID_HIT,
    UNSOLVED_HOLE,
    IMPORT_CYCLE,
    PARSE_ERROR,
}


@dataclass
class Diagnostic:
    error_class: str
    message: str
    span: Span | None = None
    file: str | None = None
    expected: str | None = None  # printed normal form
    actual: str | None = None


class CheckError(Exception):
    """Carrier for a Diagnostic raised anywhere in the pipeline."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def error(
    error_class: str,
    message: str,
    span: Span | None = None,
    expected: str | None = None,
    actual: str | None = None,
) -> CheckError:
    return CheckError(Diagnostic(error_class, message, span, None, expected, actual))


def line_col(source: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a byte offset in source text."""
    prefix = source[:offset]
    line = prefix.count("\n") + 1
    col = offset - (prefix.rfind("\n") + 1) + 1
    return line, col


def render_human(diags: list, sources: dict) -> str:
    lines = []
    for d in diags:
        file = d.file or "<input>"
        start = d.span.start if d.span else 0
        src = sources.get(d.file, "")
        line, col = line_col(src, start)
        lines.append(f"{file}:{line}:{col}: {d.error_class}: {d.message}")
        if d.expected is not None:
            lines.append(f"  expected: {d.expected}")
        if d.actual is not None:
            lines.append(f"  actual:   {d.actual}")
    return "\n".join(lines)


def render_json(diags: list) -> str:
    out = []
    for d in diags:
        obj = {
            "file": d.file or "<input>",
            "start": d.span.start if d.span else 0,
            "end": d.span.end if d.span else 0,
            "class": d.error_class,
            "message": d.message,
        }
        if d.expected is not None:
            obj["expected"] = d.expected
        if d.actual is not None:
            obj["actual"] = d.actual
        out.append(obj)
    return json.dumps(out, indent=2, sort_keys=False)


def emit_diagnostics(diags: list, fmt: str, sources: dict | None = None) -> str:
    if fmt == "json":
        return render_json(diags)
    return render_human(diags, sources or {})
