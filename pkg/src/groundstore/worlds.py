"""Heap layouts (worlds), sort-preserving injections and independent coproducts."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping


class WorldError(ValueError):
    """Raised on mismatched or ill-formed layouts and injections."""


@dataclass(frozen=True)
class World:
    """A finite layout ``loc -> sort``; cells are kept in ascending location order."""

    cells: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        locs = [loc for loc, _ in self.cells]
        if locs != sorted(set(locs)):
            raise WorldError(f"cells must have distinct ascending locations: {self.cells}")
        if locs and locs[0] < 0:
            raise WorldError("locations are natural numbers")

    @classmethod
    def of(cls, mapping: Mapping[int, str] | Iterable[tuple[int, str]]) -> World:
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(sorted(items)))

    @classmethod
    def from_sorts(cls, sorts: Iterable[str]) -> World:
        """Layout ``{#0: s0, #1: s1, ...}``."""
        return cls(tuple(enumerate(sorts)))

    @cached_property
    def _table(self) -> dict[int, str]:
        return dict(self.cells)

    def __contains__(self, loc: object) -> bool:
        return loc in self._table

    def __iter__(self) -> Iterator[int]:
        return (loc for loc, _ in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def sort_of(self, loc: int) -> str:
        try:
            return self._table[loc]
        except KeyError:
            raise WorldError(f"#{loc} is not allocated in {self}") from None

    def locs_of_sort(self, sort: str) -> list[int]:
        return [loc for loc, s in self.cells if s == sort]

    @property
    def max_index(self) -> int:
        return self.cells[-1][0] if self.cells else -1

    def is_sublayout(self, other: World) -> bool:
        return all(loc in other and other.sort_of(loc) == s for loc, s in self.cells)

    def restrict(self, locs: Iterable[int]) -> World:
        keep = set(locs)
        return World(tuple(c for c in self.cells if c[0] in keep))

    def minus(self, locs: Iterable[int]) -> World:
        drop = set(locs)
        return World(tuple(c for c in self.cells if c[0] not in drop))

    def __str__(self) -> str:
        return "{" + ", ".join(f"#{loc}:{s}" for loc, s in self.cells) + "}"


EMPTY = World()


@dataclass(frozen=True)
class Injection:
    """A sort-preserving injection ``source -> target`` given on every source cell."""

    source: World
    target: World
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if tuple(loc for loc, _ in self.pairs) != tuple(self.source):
            raise WorldError("injection must be total on its source, in ascending order")
        images = [dst for _, dst in self.pairs]
        if len(set(images)) != len(images):
            raise WorldError(f"not injective: {self.pairs}")
        for src, dst in self.pairs:
            if dst not in self.target or self.target.sort_of(dst) != self.source.sort_of(src):
                raise WorldError(f"#{src} -> #{dst} does not preserve sorts")

    @classmethod
    def of(cls, source: World, target: World, mapping: Mapping[int, int]) -> Injection:
        return cls(source, target, tuple((loc, mapping[loc]) for loc in source))

    @classmethod
    def identity(cls, w: World) -> Injection:
        return cls(w, w, tuple((loc, loc) for loc in w))

    @classmethod
    def inclusion(cls, w: World, w2: World) -> Injection:
        return cls(w, w2, tuple((loc, loc) for loc in w))

    @cached_property
    def _table(self) -> dict[int, int]:
        return dict(self.pairs)

    def __call__(self, loc: int) -> int:
        try:
            return self._table[loc]
        except KeyError:
            raise WorldError(f"#{loc} not in source {self.source}") from None

    @cached_property
    def image(self) -> frozenset[int]:
        return frozenset(dst for _, dst in self.pairs)

    @property
    def is_inclusion(self) -> bool:
        return all(a == b for a, b in self.pairs)

    @property
    def is_identity(self) -> bool:
        return self.is_inclusion and self.source == self.target

    def __str__(self) -> str:
        body = ", ".join(f"#{a}->#{b}" for a, b in self.pairs)
        return f"[{body}] : {self.source} -> {self.target}"


def inj_compose(g: Injection, f: Injection) -> Injection:
    """``g . f``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise WorldError(f"cannot compose: {f.target} != {g.source}")
    return Injection(f.source, g.target, tuple((a, g(b)) for a, b in f.pairs))


def shift(w: World, n: int) -> World:
    return World(tuple((loc + n, s) for loc, s in w.cells))


def oplus(w1: World, w2: World) -> tuple[World, Injection, Injection]:
    """Independent coproduct: ``w2`` is appended after the largest index of ``w1``."""
    offset = w1.max_index + 1
    moved = shift(w2, offset)
    result = World(w1.cells + moved.cells)
    inj1 = Injection.inclusion(w1, result)
    inj2 = Injection(w2, result, tuple((loc, loc + offset) for loc in w2))
    return result, inj1, inj2


def complement(rho: Injection) -> tuple[World, Injection]:
    """The cells of ``rho.target`` missed by ``rho``, with their inclusion."""
    rest = rho.target.minus(rho.image)
    return rest, Injection.inclusion(rest, rho.target)


def local_oplus(rho1: Injection, rho2: Injection) -> tuple[World, Injection, Injection]:
    """Local independent coproduct ``w + (w1 - rho1) + (w2 - rho2)`` of two futures of ``w``.

    Returns the amalgamated world and the two legs ``b12: w1 -> .`` and
    ``b21: w2 -> .`` with ``b12 . rho1 == b21 . rho2``.
    """
    if rho1.source != rho2.source:
        raise WorldError("local coproduct needs a shared source")
    w = rho1.source
    rest1, _ = complement(rho1)
    rest2, _ = complement(rho2)
    left, in_w, in_rest1 = oplus(w, rest1)
    result, in_left, in_rest2 = oplus(left, rest2)

    def leg(rho: Injection, fresh) -> Injection:
        back = {dst: src for src, dst in rho.pairs}
        mapping = {
            loc: in_left(in_w(back[loc])) if loc in back else fresh(loc) for loc in rho.target
        }
        return Injection.of(rho.target, result, mapping)

    b12 = leg(rho1, lambda loc: in_left(in_rest1(loc)))
    b21 = leg(rho2, in_rest2)
    return result, b12, b21


def injections(source: World, target: World, fixed: Mapping[int, int] | None = None) -> Iterator[Injection]:
    """All sort-preserving injections ``source -> target`` extending ``fixed``."""
    fixed = dict(fixed or {})
    todo = [loc for loc in source if loc not in fixed]
    used = set(fixed.values())

    def go(i: int, acc: dict[int, int]) -> Iterator[Injection]:
        if i == len(todo):
            yield Injection.of(source, target, acc)
            return
        loc = todo[i]
        for dst in target.locs_of_sort(source.sort_of(loc)):
            if dst not in used:
                used.add(dst)
                acc[loc] = dst
                yield from go(i + 1, acc)
                del acc[loc]
                used.discard(dst)

    yield from go(0, fixed)
