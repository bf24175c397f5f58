"""The full ground store monad.

A computation at world ``w`` is a behaviour: given a future ``rho: w -> w'`` and
a total heap over ``w'`` it returns a hidden result ``(w' -> w'', value, heap)``
whose private cells are the ones it allocated and did not reveal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .heaplets import Heaplet, HeapletError, all_heaps, pcm_mult, transport
from .hiding import Hidden, canonicalize
from .initializations import fresh_extensions
from .values import (
    UNIT,
    One,
    Pair,
    Prod,
    RefVal,
    SortTable,
    TypeExpr,
    Value,
    rename_value,
    tuple_value,
)
from .worlds import Injection, World, WorldError, inj_compose, oplus

Runner = Callable[[Injection, Heaplet], Hidden]
Kleisli = Callable[[Injection, Value], "MonadVal"]


class StoreError(RuntimeError):
    """A computation was run outside its contract (bad world, partial heap, ...)."""


@dataclass(frozen=True, eq=False)
class MonadVal:
    result_type: TypeExpr
    at_world: World
    behaviour: Runner

    def run(self, rho: Injection, heap: Heaplet) -> Hidden:
        if rho.source != self.at_world:
            raise StoreError(f"computation at {self.at_world} run from {rho.source}")
        if heap.over != rho.target or not heap.is_total:
            raise StoreError("computations run on a total heap over the future world")
        out = self.behaviour(rho, heap)
        if out.public != rho.target:
            raise StoreError("result must be public at the future world")
        return out

    def run_here(self, heap: Heaplet) -> Hidden:
        return self.run(Injection.identity(self.at_world), heap)


def t_unit(v: Value, a: TypeExpr, w: World) -> MonadVal:
    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        return Hidden(Injection.identity(rho.target), heap, rename_value(rho, v))

    return MonadVal(a, w, behaviour)


def t_bind(m: MonadVal, f: Kleisli, b: TypeExpr) -> MonadVal:
    """Kleisli extension: run ``m``, continue with ``f`` at the world it reached."""

    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        first = m.run(rho, heap)
        here = first.carrier
        second = f(inj_compose(first.rho, rho), first.value).run(Injection.identity(here), first.heap)
        return Hidden(inj_compose(second.rho, first.rho), second.heap, second.value)

    return MonadVal(b, m.at_world, behaviour)


def t_map(m: MonadVal, fn: Callable[[Injection, Value], Value], b: TypeExpr) -> MonadVal:
    """Post-compose a natural value transformation (``fn`` gets the world reached)."""

    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        r = m.run(rho, heap)
        return Hidden(r.rho, r.heap, fn(inj_compose(r.rho, rho), r.value))

    return MonadVal(b, m.at_world, behaviour)


def t_strength(s: Value, gamma: TypeExpr, m: MonadVal) -> MonadVal:
    """Pair a context value (renamed into the reached world) with ``m``'s result."""
    return t_map(m, lambda sigma, x: Pair(rename_value(sigma, s), x), Prod(gamma, m.result_type))


def _check_ref(l: Value, w: World) -> RefVal:
    if not isinstance(l, RefVal) or l.loc not in w or w.sort_of(l.loc) != l.sort:
        raise StoreError(f"{l} is not a reference of {w}")
    return l


def op_get(l: Value, w: World, a: TypeExpr) -> MonadVal:
    ref = _check_ref(l, w)

    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        return Hidden(Injection.identity(rho.target), heap, heap[rho(ref.loc)])

    return MonadVal(a, w, behaviour)


def op_put(l: Value, v: Value, w: World) -> MonadVal:
    ref = _check_ref(l, w)

    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        updated = heap.updated(rho(ref.loc), rename_value(rho, v))
        return Hidden(Injection.identity(rho.target), updated, UNIT)

    return MonadVal(One(), w, behaviour)


def op_new(
    sorts: Sequence[str],
    initializers: Callable[[Injection, list[RefVal]], list[Value]],
    w: World,
    ref_type: TypeExpr,
) -> MonadVal:
    """Simultaneously allocate one cell per sort.

    ``initializers(sigma, refs)`` receives the injection ``sigma`` from ``w``
    into the extended world and the fresh references (all in scope, so cells
    may point at each other) and returns their contents.  The result is the
    tuple of fresh references; the fresh cells are hidden.
    """

    def behaviour(rho: Injection, heap: Heaplet) -> Hidden:
        extended, inl, inr = oplus(rho.target, World.from_sorts(sorts))
        refs = [RefVal(inr(i), s) for i, s in enumerate(sorts)]
        contents = initializers(inj_compose(inl, rho), refs)
        fresh = Heaplet.of(extended, {r.loc: v for r, v in zip(refs, contents)})
        joined = pcm_mult(transport(heap, inl), fresh)
        if not isinstance(joined, Heaplet):
            raise HeapletError("fresh cells overlap the old heap")
        return Hidden(inl, joined, tuple_value(*refs))

    return MonadVal(ref_type, w, behaviour)


# ---------------------------------------------------------------- observation


def futures(w: World, table: SortTable, domain: range, max_extra: int) -> Iterator[tuple[Injection, Heaplet]]:
    """Representative ``(rho, heap)`` arguments: ``w`` plus up to ``max_extra`` cells, every total heap."""
    for e in fresh_extensions(w, table.sorts, max_extra, table, domain, fills="none"):
        for heap in all_heaps(e.target, table, domain):
            yield e.rho, heap


def observe(m: MonadVal, rho: Injection, heap: Heaplet) -> Hidden:
    return canonicalize(m.run(rho, heap))


def observably_equal(
    m1: MonadVal, m2: MonadVal, table: SortTable, domain: range, max_extra: int = 0
) -> tuple[Injection, Heaplet, Hidden, Hidden] | None:
    """``None`` if the computations agree on every argument within bounds, else a witness."""
    if m1.at_world != m2.at_world:
        raise WorldError("computations at different worlds")
    for rho, heap in futures(m1.at_world, table, domain, max_extra):
        a, b = observe(m1, rho, heap), observe(m2, rho, heap)
        if a != b:
            return rho, heap, a, b
    return None
