"""Lint issue record shared by the library and bank linters."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class LintIssue:
    code: str
    severity: str  # ERROR or WARNING
    subject: str  # clause id, question number or taxonomy path
    message: str

    def __str__(self) -> str:
        return f"{self.severity}[{self.code}] {self.subject}: {self.message}"


def errors_only(issues) -> list[LintIssue]:
    return [i for i in issues if i.severity == ERROR]
