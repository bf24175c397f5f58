"""Enumeration bounds shared by the checker, the entailment search and the law suites."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

FillMode = Literal["monotone", "literal"]


@dataclass(frozen=True)
class Bounds:
    """How far the bounded checker looks.

    ``max_extra_cells``: fresh cells per quantifier / implication / wand step.
    ``int_min``..``int_max``: the finite range standing in for ``int``.
    ``max_world``: cell cap for worlds enumerated by entailment checks and
    for hidden cells of fixpoint tables.
    ``fills``: ``literal`` enumerates every partial fill of fresh cells in the
    quantifier and wand clauses; ``monotone`` keeps only the fills that the
    Monotonicity property makes decisive (all-filled for ``exists``, unfilled
    for ``forall`` and ``-*``).
    ``naive_implication``: use the plain Kripke clause for ``->`` (diagnostic).
    """

    max_extra_cells: int = 2
    int_min: int = 0
    int_max: int = 7
    max_world: int = 3
    fills: FillMode = "monotone"
    naive_implication: bool = False

    def __post_init__(self) -> None:
        if self.max_extra_cells < 0 or self.max_world < 0:
            raise ValueError("bounds must be non-negative")
        if self.int_min > self.int_max:
            raise ValueError(f"empty int domain {self.int_min}..{self.int_max}")
        if self.fills not in ("monotone", "literal"):
            raise ValueError(f"unknown fill mode {self.fills!r}")

    @property
    def domain(self) -> range:
        return range(self.int_min, self.int_max + 1)

    def as_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        text = (
            f"max_extra_cells={self.max_extra_cells} int_domain={self.int_min}..{self.int_max} "
            f"max_world={self.max_world} fills={self.fills}"
        )
        return text + (" naive_implication" if self.naive_implication else "")
