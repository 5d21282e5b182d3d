"""Diagnostics shared by the parser and the static analyses."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int = 0
    col: int = 0
    file: str = "<input>"

    def render(self) -> str:
        return f"{self.file}:{self.line}:{self.col}: {self.code}: {self.message}"

    def __str__(self) -> str:
        return self.render()


class DiagnosticError(Exception):
    """Raised by front-end entry points when a phase reports errors."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.render() for d in self.diagnostics))
