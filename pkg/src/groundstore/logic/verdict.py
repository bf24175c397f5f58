"""Verdicts of the bounded checker and their text / JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from ..heaplets import Heaplet
from ..values import Value
from ..worlds import Injection, World
from .bounds import Bounds

HOLDS = "HoldsAtBound"
FAILS = "FailsWithWitness"


def heaplet_literal(h: Heaplet) -> str:
    """The CLI's heaplet literal, e.g. ``over {#0:Int} { #0 -> 5 }``."""
    return str(h)


def env_literal(env: tuple[tuple[str, Value], ...]) -> str:
    return ", ".join(f"{name} = {v}" for name, v in env)


@dataclass(frozen=True)
class Witness:
    """A concrete state ``(world, env, rho, heap)`` refuting the claim."""

    world: World
    env: tuple[tuple[str, Value], ...]
    rho: Injection
    heap: Heaplet
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "world": str(self.world),
            "env": {name: str(v) for name, v in self.env},
            "rho": str(self.rho) if not self.rho.is_identity else "id",
            "heaplet": heaplet_literal(self.heap),
            "note": self.note,
        }


@dataclass(frozen=True)
class Verdict:
    formula: str
    bounds: Bounds
    witness: Witness | None = None
    states: int = 0
    notes: tuple[str, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.witness is None

    @property
    def outcome(self) -> str:
        return HOLDS if self.holds else FAILS

    def as_dict(self) -> dict[str, Any]:
        return {
            "formula": self.formula,
            "bounds": self.bounds.as_dict(),
            "outcome": self.outcome,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "states": self.states,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"formula: {self.formula}", f"bounds: {self.bounds}", f"states: {self.states}"]
        if self.holds:
            lines.append(f"outcome: {HOLDS} (universal claims are checked only up to the bounds)")
        else:
            w = self.witness
            lines.append(f"outcome: {FAILS}")
            lines.append(f"witness.world: {w.world}")
            lines.append(f"witness.env: {env_literal(w.env) or '(empty)'}")
            lines.append(f"witness.rho: {'id' if w.rho.is_identity else w.rho}")
            lines.append(f"witness.heaplet: {heaplet_literal(w.heap)}")
            if w.note:
                lines.append(f"witness.note: {w.note}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def verdict_schema() -> dict[str, Any]:
    """The JSON schema documenting :meth:`Verdict.as_dict`."""
    text = resources.files(__package__).joinpath("verdict.schema.json").read_text()
    return json.loads(text)
