"""Check reports shared by all verification routines."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool | None  # None means skipped
    witnesses: list = field(default_factory=list)
    method: str = ""
    detail: str = ""

    @property
    def status(self) -> str:
        return "skipped" if self.passed is None else ("pass" if self.passed else "fail")

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "method": self.method,
                "detail": self.detail, "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses]}


@dataclass
class Report:
    subject: str
    mode: str = "exact"
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def add(self, name: str, passed, witnesses=None, method: str = "", detail: str = "") -> Check:
        c = Check(name, None if passed is None else bool(passed), list(witnesses or [])[:10], method, detail)
        self.checks.append(c)
        return c

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witnesses, c.method, c.detail))
        self.notes.extend(other.notes)
        for k, v in other.timings.items():
            self.timings[prefix + k] = v

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    def get(self, name: str) -> Check | None:
        return next((c for c in self.checks if c.name == name), None)

    def to_dict(self) -> dict:
        return {"subject": self.subject, "mode": self.mode, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks], "notes": list(self.notes),
                "info": {k: (str(v) if not isinstance(v, (int, float, str, bool, list, dict, type(None))) else v)
                         for k, v in self.info.items()},
                "timings": {k: round(v, 3) for k, v in self.timings.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render(self) -> str:
        lines = [f"== {self.subject} [{self.mode}] {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            extra = f" ({c.method})" if c.method else ""
            lines.append(f"  {c.status:7s} {c.name}{extra}")
            if c.detail:
                lines.append(f"          {c.detail}")
            if c.passed is False and c.witnesses:
                lines.append(f"          witnesses: {c.witnesses}")
        for k, v in self.info.items():
            lines.append(f"  {k}: {v}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        if self.timings:
            lines.append("  timings: " + ", ".join(f"{k}={v:.2f}s" for k, v in self.timings.items()))
        return "\n".join(lines)
