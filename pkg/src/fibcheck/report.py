"""Per-theorem verdict reports."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def verdict(self):
        vals = set(self.verdicts.values())
        return vals.pop() if len(vals) == 1 else None

    @property
    def all_true(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self):
        return {
            "name": self.name,
            "verdicts": dict(self.verdicts),
            "agree": self.agree,
            "witnesses": {k: repr(v) for k, v in self.witnesses.items()},
            "notes": list(self.notes),
        }

    def __str__(self):
        parts = ", ".join(f"{k}={v}" for k, v in self.verdicts.items())
        return f"{self.name}: {parts}" + ("" if self.agree else "  [DISAGREE]")
