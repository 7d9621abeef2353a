"""Pass/fail reports with first witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


def _plain(w):
    if w is None:
        return None
    if isinstance(w, (list, tuple)):
        return [_plain(v) for v in w]
    if hasattr(w, "item"):
        return w.item()
    return w


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Optional[tuple] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "witness": _plain(self.witness)}


@dataclass
class Report:
    """An ordered list of named checks. Truthy iff every check passed."""

    checks: list = field(default_factory=list)

    def add(self, name, passed, witness=None, detail=""):
        self.checks.append(Check(name, bool(passed), None if passed else witness, detail))
        return self

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self.checks)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks]}
