"""Report-valued checks: a violation list instead of a bare boolean."""

from __future__ import annotations


class Violation:
    def __init__(self, kind: str, where: str, detail: str = ""):
        self.kind = kind
        self.where = where
        self.detail = detail

    def __repr__(self):
        tail = f": {self.detail}" if self.detail else ""
        return f"[{self.kind}] at {self.where}{tail}"


class CheckReport:
    def __init__(self, subject: str):
        self.subject = subject
        self.violations: list[Violation] = []

    def add(self, kind: str, where: str, detail: str = ""):
        self.violations.append(Violation(kind, where, detail))

    @property
    def ok(self) -> bool:
        return not self.violations

    def merged(self, other: "CheckReport") -> "CheckReport":
        out = CheckReport(self.subject)
        out.violations = self.violations + other.violations
        return out

    def lines(self) -> list[str]:
        if self.ok:
            return [f"check {self.subject}: ok"]
        out = [f"check {self.subject}: {len(self.violations)} violation(s)"]
        out.extend(f"  {v!r}" for v in self.violations)
        return out

    def __repr__(self):
        return "\n".join(self.lines())
