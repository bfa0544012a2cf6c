"""Structured pass/fail evidence shared by every verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

ERROR = "error"
WARNING = "warning"
INFO = "info"


@dataclass
class Finding:
    severity: str
    location: str
    message: str
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "location": self.location,
            "message": self.message,
            "data": self.data,
        }


@dataclass
class VerificationReport:
    subject: str = ""
    findings: list[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(f.severity == ERROR for f in self.findings)

    def __bool__(self) -> bool:
        return self.passed

    def error(self, location: str, message: str, **data) -> None:
        self.findings.append(Finding(ERROR, location, message, data))

    def info(self, location: str, message: str, **data) -> None:
        self.findings.append(Finding(INFO, location, message, data))

    def warning(self, location: str, message: str, **data) -> None:
        self.findings.append(Finding(WARNING, location, message, data))

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for f in other.findings:
            loc = f"{prefix}{f.location}" if prefix else f.location
            self.findings.append(Finding(f.severity, loc, f.message, f.data))

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "pass": self.passed,
            "findings": [f.to_dict() for f in self.findings],
        }
