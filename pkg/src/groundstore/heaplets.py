"""Heaplets: partial heaps whose contents live over a (possibly larger) world.

A heaplet over ``w`` fills a sub-layout ``dom`` of ``w``; cells of ``w`` outside
``dom`` are inaccessible.  Heaplets over a fixed world form an ordered partial
commutative monoid under disjoint union.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .values import SortTable, Value, enum_values, locations, rename_value, well_typed
from .worlds import Injection, World, WorldError, oplus


class HeapletError(WorldError):
    """Ill-formed heaplet or mismatched over-worlds."""


class _Undefined:
    """The outcome of multiplying overlapping heaplets."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()


@dataclass(frozen=True)
class Heaplet:
    over: World
    cells: tuple[tuple[int, Value], ...] = ()

    def __post_init__(self) -> None:
        locs = [loc for loc, _ in self.cells]
        if locs != sorted(set(locs)):
            raise HeapletError(f"heaplet cells must be distinct and ascending: {locs}")
        for loc in locs:
            if loc not in self.over:
                raise HeapletError(f"#{loc} is not a cell of {self.over}")

    @classmethod
    def of(cls, over: World, mapping: Mapping[int, Value] | None = None) -> Heaplet:
        return cls(over, tuple(sorted((mapping or {}).items())))

    @classmethod
    def empty(cls, over: World) -> Heaplet:
        return cls(over, ())

    @cached_property
    def table(self) -> dict[int, Value]:
        return dict(self.cells)

    @cached_property
    def dom(self) -> World:
        return self.over.restrict(self.table)

    @property
    def locs(self) -> frozenset[int]:
        return frozenset(self.table)

    @property
    def is_total(self) -> bool:
        return len(self.cells) == len(self.over)

    def __getitem__(self, loc: int) -> Value:
        try:
            return self.table[loc]
        except KeyError:
            raise HeapletError(f"#{loc} is inaccessible in {self}") from None

    def __contains__(self, loc: object) -> bool:
        return loc in self.table

    def __len__(self) -> int:
        return len(self.cells)

    def updated(self, loc: int, value: Value) -> Heaplet:
        table = dict(self.table)
        table[loc] = value
        return Heaplet.of(self.over, table)

    def without(self, locs: Iterable[int]) -> Heaplet:
        drop = set(locs)
        return Heaplet(self.over, tuple(c for c in self.cells if c[0] not in drop))

    def check(self, table: SortTable, domain: range | None = None) -> None:
        for loc, v in self.cells:
            sort = self.over.sort_of(loc)
            if not well_typed(v, table.ctype(sort), self.over, domain):
                raise HeapletError(f"#{loc}:{sort} holds ill-typed {v}")

    def __str__(self) -> str:
        body = ", ".join(f"#{loc} -> {v}" for loc, v in self.cells)
        return f"over {self.over} {{ {body} }}" if body else f"over {self.over} {{}}"


def transport(h: Heaplet, rho: Injection) -> Heaplet:
    """Covariant action: push cells and their contents forward along ``rho``."""
    if rho.source != h.over:
        raise HeapletError(f"transport: {rho.source} is not the over-world {h.over}")
    return Heaplet.of(rho.target, {rho(loc): rename_value(rho, v) for loc, v in h.cells})


def restrict(h: Heaplet, w0: World | Iterable[int]) -> Heaplet:
    """Contravariant action: project onto a sub-layout of ``dom h``."""
    keep = set(w0)
    if not keep <= h.locs:
        raise HeapletError(f"restrict: {sorted(keep - h.locs)} not in dom")
    return Heaplet(h.over, tuple(c for c in h.cells if c[0] in keep))


def _same_over(h1: Heaplet, h2: Heaplet) -> None:
    if h1.over != h2.over:
        raise HeapletError(f"over-world mismatch: {h1.over} vs {h2.over}")


def pcm_mult(h1: Heaplet, h2: Heaplet) -> Heaplet | _Undefined:
    _same_over(h1, h2)
    if h1.locs & h2.locs:
        return UNDEFINED
    return Heaplet(h1.over, tuple(sorted(h1.cells + h2.cells)))


def pcm_leq(h1: Heaplet, h2: Heaplet) -> bool:
    _same_over(h1, h2)
    return all(loc in h2.table and h2.table[loc] == v for loc, v in h1.cells)


def heaplet_oplus(h1: Heaplet, h2: Heaplet) -> tuple[Heaplet, Injection, Injection]:
    """Amalgamate heaplets over ``w1`` and ``w2`` into one over ``w1 (+) w2``."""
    w, inj1, inj2 = oplus(h1.over, h2.over)
    joined = pcm_mult(transport(h1, inj1), transport(h2, inj2))
    assert joined is not UNDEFINED
    return joined, inj1, inj2


def reachable(roots: Iterable[int], h: Heaplet) -> list[int]:
    """Locations reachable from ``roots`` through filled cells, in BFS order."""
    seen: dict[int, None] = {}
    queue = list(roots)
    while queue:
        loc = queue.pop(0)
        if loc in seen:
            continue
        seen[loc] = None
        if loc in h.table:
            queue.extend(r.loc for r in locations(h.table[loc]))
    return list(seen)


# ---------------------------------------------------------------- enumeration


def cell_options(over: World, loc: int, table: SortTable, domain: range) -> list[Value]:
    return enum_values(table.ctype(over.sort_of(loc)), over, domain)


def all_heaplets(
    over: World,
    table: SortTable,
    domain: range,
    base: Heaplet | None = None,
    locs: Iterable[int] | None = None,
    total: bool = False,
) -> Iterator[Heaplet]:
    """Every heaplet over ``over`` extending ``base`` on the cells ``locs``.

    Each cell of ``locs`` (default: every cell not already filled by ``base``)
    is left inaccessible or filled with every well-typed content; with
    ``total`` every such cell is filled.
    """
    base = base or Heaplet.empty(over)
    todo = [loc for loc in (over if locs is None else locs) if loc not in base.table]
    choices = []
    for loc in todo:
        opts: list[Value | None] = list(cell_options(over, loc, table, domain))
        if not total:
            opts = [None] + opts
        choices.append(opts)
    for combo in itertools.product(*choices):
        extra = {loc: v for loc, v in zip(todo, combo) if v is not None}
        if not extra:
            yield base
        else:
            table_ = dict(base.table)
            table_.update(extra)
            yield Heaplet.of(over, table_)


def all_heaps(over: World, table: SortTable, domain: range) -> Iterator[Heaplet]:
    return all_heaplets(over, table, domain, total=True)


def extensions(h: Heaplet, table: SortTable, domain: range) -> Iterator[Heaplet]:
    """All ``h'`` with ``h <= h'`` over the same world."""
    return all_heaplets(h.over, table, domain, base=h)


def splits(h: Heaplet) -> Iterator[tuple[Heaplet, Heaplet]]:
    """All pairs ``(h1, h2)`` with ``h1 . h2 = h``."""
    cells = h.cells
    for mask in range(1 << len(cells)):
        left = tuple(c for i, c in enumerate(cells) if mask >> i & 1)
        right = tuple(c for i, c in enumerate(cells) if not mask >> i & 1)
        yield Heaplet(h.over, left), Heaplet(h.over, right)
