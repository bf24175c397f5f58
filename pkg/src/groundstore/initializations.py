"""Initializations: injections that also fill (some of) the freshly added cells.

Total initializations are the morphisms of the category E, partial ones the
morphisms of its relaxation E-hat; one class serves both, with ``is_total``
telling them apart.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal

from .heaplets import Heaplet, HeapletError, all_heaplets, pcm_mult, transport
from .values import SortTable
from .worlds import Injection, World, WorldError, complement, inj_compose, local_oplus, oplus


@dataclass(frozen=True)
class Init:
    rho: Injection
    fill: Heaplet

    def __post_init__(self) -> None:
        if self.fill.over != self.rho.target:
            raise WorldError("fill must live over the target world")
        clash = self.fill.locs & self.rho.image
        if clash:
            raise HeapletError(f"initialization overwrites old cells {sorted(clash)}")

    @classmethod
    def identity(cls, w: World) -> Init:
        return cls(Injection.identity(w), Heaplet.empty(w))

    @classmethod
    def bare(cls, rho: Injection) -> Init:
        """The initialization that allocates without filling anything."""
        return cls(rho, Heaplet.empty(rho.target))

    @property
    def source(self) -> World:
        return self.rho.source

    @property
    def target(self) -> World:
        return self.rho.target

    @property
    def is_total(self) -> bool:
        return self.fill.locs == frozenset(complement(self.rho)[0])

    def __str__(self) -> str:
        return f"Init({self.rho}, fill {self.fill})"


def init_compose(e2: Init, e1: Init) -> Init:
    """``e2 . e1``: old fills are carried along ``e2.rho``, then ``e2``'s fills added."""
    if e1.target != e2.source:
        raise WorldError(f"cannot compose initializations: {e1.target} != {e2.source}")
    fill = pcm_mult(transport(e1.fill, e2.rho), e2.fill)
    return Init(inj_compose(e2.rho, e1.rho), fill)


def hhat_apply(e: Init, h: Heaplet) -> Heaplet:
    """Functorial action of E-hat on heaplets: rename old cells, add the fills."""
    if h.over != e.source:
        raise WorldError(f"hhat_apply: heaplet over {h.over}, init from {e.source}")
    return pcm_mult(transport(h, e.rho), e.fill)


def promote(rho1: Injection, e: Init) -> Init:
    """Replay ``e`` (from ``w``) after ``rho1: w -> w1`` in the local coproduct."""
    if rho1.source != e.source:
        raise WorldError("promote needs a shared source")
    _, b12, b21 = local_oplus(rho1, e.rho)
    return Init(b12, transport(e.fill, b21))


def promote_pair(e1: Init, e2: Init) -> tuple[Init, Init]:
    """Complete a span of initializations to a commuting square.

    Returns ``(f1, f2)`` with ``f1: e1.target ~> W``, ``f2: e2.target ~> W`` and
    ``f1 . e1 == f2 . e2``.
    """
    if e1.source != e2.source:
        raise WorldError("promote_pair needs a shared source")
    _, b12, b21 = local_oplus(e1.rho, e2.rho)
    return Init(b12, transport(e2.fill, b21)), Init(b21, transport(e1.fill, b12))


FillMode = Literal["none", "partial", "total"]


def fresh_extensions(
    w: World,
    sorts: Iterable[str],
    max_fresh: int,
    table: SortTable,
    domain: range,
    fills: FillMode = "partial",
    min_fresh: int = 0,
) -> Iterator[Init]:
    """Initializations ``w ~> w (+) fresh`` with between ``min_fresh`` and ``max_fresh`` new cells.

    Fresh layouts range over sort multisets (every other choice is isomorphic
    to one of these); fills are drawn according to ``fills``.
    """
    sorts = list(sorts)
    for n in range(min_fresh, max_fresh + 1):
        for combo in itertools.combinations_with_replacement(sorts, n):
            target, inj, inj2 = oplus(w, World.from_sorts(combo))
            if fills == "none" or n == 0:
                yield Init.bare(inj)
                continue
            fresh = [inj2(loc) for loc in inj2.source]
            for fill in all_heaplets(target, table, domain, locs=fresh, total=fills == "total"):
                yield Init(inj, fill)
