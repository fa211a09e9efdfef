"""Pass/fail reports shared by the verifiers and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    max_deviation: float = 0.0
    detail: Any = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "pass": bool(self.passed), "max_deviation": float(self.max_deviation)}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    """Ordered list of checks; failures are recorded, never raised."""

    subject: str
    checks: list[Check] = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, max_deviation: float = 0.0, detail: Any = None) -> Check:
        check = Check(name, bool(passed), float(max_deviation), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        for c in other.checks:
            name = f"{prefix}: {c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.max_deviation, c.detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "results": self.results,
        }
