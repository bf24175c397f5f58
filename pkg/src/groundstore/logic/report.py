"""Law-suite reports: per-law counts of checked instances and concrete violations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

MAX_EXAMPLES = 5


@dataclass
class LawResult:
    name: str
    checked: int = 0
    violations: int = 0
    examples: list[str] = field(default_factory=list)

    def check(self, ok: bool, witness: Any = "") -> bool:
        """Record one instance; ``witness`` may be a thunk so it is only rendered on failure."""
        self.checked += 1
        if not ok:
            self.violations += 1
            if len(self.examples) < MAX_EXAMPLES:
                self.examples.append(str(witness() if callable(witness) else witness))
        return ok

    def bulk(self, checked: int, failures: list[Any]) -> None:
        """Record ``checked`` instances at once, of which ``failures`` (witnesses or thunks) failed."""
        self.checked += checked
        self.violations += len(failures)
        for witness in failures[: MAX_EXAMPLES - len(self.examples)]:
            self.examples.append(str(witness() if callable(witness) else witness))

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass
class Report:
    suite: str
    config: dict[str, Any] = field(default_factory=dict)
    results: dict[str, LawResult] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def law(self, name: str) -> LawResult:
        if name not in self.results:
            self.results[name] = LawResult(name)
        return self.results[name]

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.results.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "config": self.config,
            "outcome": "ok" if self.ok else "violations",
            "violations": self.violations,
            "laws": [
                {"name": r.name, "checked": r.checked, "violations": r.violations, "examples": r.examples}
                for r in self.results.values()
            ],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        config = " ".join(f"{k}={v}" for k, v in self.config.items())
        lines = [f"suite: {self.suite}", f"config: {config}"]
        for r in self.results.values():
            status = "ok" if r.ok else "VIOLATED"
            lines.append(f"law {r.name}: {status} checked={r.checked} violations={r.violations}")
            lines.extend(f"  witness: {e}" for e in r.examples)
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"total violations: {self.violations}")
        return "\n".join(lines)
