"""Exception hierarchy and diagnostics shared by every stage of the engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int | None = None
    column: int | None = None
    source: str | None = None

    def __str__(self) -> str:
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.severity}: {self.message}"


class SolpError(Exception):
    """Base class for all engine errors."""


class DiagnosticError(SolpError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class ParseError(DiagnosticError):
    pass


class ValidationError(DiagnosticError):
    pass


class BoundsError(SolpError):
    """Selection bounds that cannot satisfy 0 <= l <= h <= n-1."""


class CapExceeded(SolpError):
    def __init__(self, cap: str, size: int, limit: int, detail: str = ""):
        self.cap, self.size, self.limit = cap, size, limit
        msg = f"{cap} exceeded: {size} > {limit}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class TranslationError(SolpError):
    pass


class OracleError(SolpError):
    pass


class MalformedProgram(OracleError):
    pass
