"""The hiding quotient.

A ``Hidden`` is a representative ``(rho: w -> w', payload over w')`` where the
cells of ``w'`` outside the image of ``rho`` are private.  Two representatives
are identified when they agree on the public and the reachable private part;
``canonicalize`` picks a unique representative of each class, while
``equiv_oracle`` searches the generating preorder directly (used for
validation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .heaplets import Heaplet, pcm_leq
from .initializations import Init, fresh_extensions, hhat_apply, promote
from .values import SortTable, Value, locations, relabel, rename_value
from .worlds import Injection, World, WorldError, inj_compose, injections, local_oplus


@dataclass(frozen=True)
class Hidden:
    rho: Injection
    heap: Heaplet
    value: Value | None = None

    def __post_init__(self) -> None:
        if self.heap.over != self.rho.target:
            raise WorldError("hidden payload must live over the carrier world")

    @property
    def public(self) -> World:
        return self.rho.source

    @property
    def carrier(self) -> World:
        return self.rho.target

    @property
    def hidden_cells(self) -> list[int]:
        return [loc for loc in self.carrier if loc not in self.rho.image]

    def __str__(self) -> str:
        hidden = self.carrier.restrict(self.hidden_cells)
        parts = [f"public {self.public}", f"hidden {hidden}"]
        if not self.rho.is_inclusion:
            parts.append(f"via {self.rho}")
        if self.value is not None:
            parts.append(f"value {self.value}")
        body = ", ".join(f"#{loc} -> {v}" for loc, v in self.heap.cells)
        parts.append(f"heap {{ {body} }}" if body else "heap {}")
        return "; ".join(parts)


def reveal(h: Heaplet, value: Value | None = None) -> Hidden:
    """The representative with nothing hidden."""
    return Hidden(Injection.identity(h.over), h, value)


def hide(rho: Injection, h: Hidden) -> Hidden:
    """Forget that the cells outside ``rho`` were public."""
    if rho.target != h.public:
        raise WorldError(f"hide: {rho.target} is not the public world {h.public}")
    return Hidden(inj_compose(h.rho, rho), h.heap, h.value)


def forward(e: Init, h: Hidden) -> Hidden:
    """One generating step ``(rho, x) <= (u(e) . rho, H(e) x)`` of the hiding preorder."""
    if e.source != h.carrier:
        raise WorldError("forward: initialization must start at the carrier")
    value = None if h.value is None else rename_value(e.rho, h.value)
    return Hidden(inj_compose(e.rho, h.rho), hhat_apply(e, h.heap), value)


def pcov_apply(e: Init, h: Hidden) -> Hidden:
    """Covariant action of the hiding functor along an initialization of the public world."""
    if e.source != h.public:
        raise WorldError("pcov_apply: initialization must start at the public world")
    _, _, b21 = local_oplus(h.rho, e.rho)
    lifted = promote(h.rho, e)
    value = None if h.value is None else rename_value(lifted.rho, h.value)
    return Hidden(b21, hhat_apply(lifted, h.heap), value)


# ---------------------------------------------------------------- canonical forms


def _value_locs(value: Value | None) -> list[int]:
    return [] if value is None else [r.loc for r in locations(value)]


def canonical_renaming(h: Hidden) -> dict[int, int]:
    """Map each kept carrier cell to its canonical name.

    Public cells take their public index; reachable private cells are named by
    the first indices not used by the public world, in breadth-first discovery
    order from (public cells ascending, then payload-value occurrences),
    following stored values in component order.
    """
    public = h.public
    back = {dst: src for src, dst in h.rho.pairs}
    order: list[int] = []
    seen: set[int] = set()
    queue = [h.rho(loc) for loc in public] + _value_locs(h.value)
    head = 0
    while head < len(queue):
        loc = queue[head]
        head += 1
        if loc in seen:
            continue
        seen.add(loc)
        if loc not in back:
            order.append(loc)
        if loc in h.heap.table:
            queue.extend(r.loc for r in locations(h.heap.table[loc]))
    mapping = {dst: src for dst, src in back.items()}
    fresh = 0
    for loc in order:
        while fresh in public:
            fresh += 1
        mapping[loc] = fresh
        fresh += 1
    return mapping


def canonicalize(h: Hidden) -> Hidden:
    """The canonical representative of the class of ``h``."""
    mapping = canonical_renaming(h)
    carrier = World.of((new, h.carrier.sort_of(old)) for old, new in mapping.items())
    heap = Heaplet.of(
        carrier, {mapping[loc]: relabel(mapping, v) for loc, v in h.heap.cells if loc in mapping}
    )
    value = None if h.value is None else relabel(mapping, h.value)
    return Hidden(Injection.inclusion(h.public, carrier), heap, value)


def is_canonical(h: Hidden) -> bool:
    return canonicalize(h) == h


def equivalent(h1: Hidden, h2: Hidden) -> bool:
    if h1.public != h2.public:
        raise WorldError("hidden values at different public worlds are incomparable")
    return canonicalize(h1) == canonicalize(h2)


# ---------------------------------------------------------------- generative oracle


def _sort_counts(w: World) -> dict[str, int]:
    counts: dict[str, int] = {}
    for _, s in w.cells:
        counts[s] = counts.get(s, 0) + 1
    return counts


def precedes(h: Hidden, u: Hidden) -> Init | None:
    """An initialization ``e`` with ``forward(e, h) == u``, if one exists."""
    if h.public != u.public:
        return None
    have, need = _sort_counts(u.carrier), _sort_counts(h.carrier)
    if any(have.get(s, 0) < n for s, n in need.items()):
        return None
    fixed = {h.rho(loc): u.rho(loc) for loc in h.public}
    for tau in injections(h.carrier, u.carrier, fixed):
        ok = True
        for loc in h.carrier:
            image = tau(loc)
            if loc in h.heap.table:
                if u.heap.table.get(image) != rename_value(tau, h.heap.table[loc]):
                    ok = False
                    break
            elif image in u.heap.table:
                ok = False
                break
        if not ok:
            continue
        if (h.value is None) != (u.value is None):
            return None
        if h.value is not None and rename_value(tau, h.value) != u.value:
            continue
        fill = u.heap.without(tau.image)
        return Init(tau, fill)
    return None


def upper_bounds(
    h: Hidden, table: SortTable, domain: range, max_extra: int, total: bool = False
) -> Iterator[tuple[Init, Hidden]]:
    """Every forward step from ``h`` adding at most ``max_extra`` cells."""
    mode = "total" if total else "partial"
    for e in fresh_extensions(h.carrier, table.sorts, max_extra, table, domain, fills=mode):
        yield e, forward(e, h)


def equiv_oracle(
    h1: Hidden,
    h2: Hidden,
    table: SortTable,
    domain: range,
    max_extra: int = 2,
    total: bool = False,
) -> bool:
    """Search for a common upper bound of ``h1`` and ``h2`` in the hiding preorder.

    ``True`` is always sound; ``False`` means no witness with at most
    ``max_extra`` fresh cells on the ``h1`` side.
    """
    if h1.public != h2.public:
        raise WorldError("hidden values at different public worlds are incomparable")
    need = len(h2.carrier) - len(h1.carrier)
    for _, u in upper_bounds(h1, table, domain, max_extra, total):
        if len(u.carrier) - len(h1.carrier) < need:
            continue
        if precedes(h2, u) is not None:
            return True
    return False


def representatives(
    h: Hidden, table: SortTable, domain: range, max_extra: int, fills: str = "none"
) -> Iterator[Hidden]:
    """Representatives of the class of ``h``: its canonical form plus up to ``max_extra`` private cells."""
    c = canonicalize(h)
    for e in fresh_extensions(c.carrier, table.sorts, max_extra, table, domain, fills=fills):
        yield forward(e, c)


def heap_leq(h1: Hidden, h2: Hidden) -> bool:
    """Same injection, ``h1``'s heaplet below ``h2``'s."""
    return h1.rho == h2.rho and h1.value == h2.value and pcm_leq(h1.heap, h2.heap)


def all_hidden(
    public: World,
    table: SortTable,
    domain: range,
    max_hidden: int,
    value_type=None,
    total: bool = False,
    canonical_only: bool = False,
) -> Iterator[Hidden]:
    """Every representative ``(public ⊆ public (+) hidden, payload)`` with at most ``max_hidden`` private cells."""
    from .heaplets import all_heaplets
    from .values import enum_values

    for e in fresh_extensions(public, table.sorts, max_hidden, table, domain, fills="none"):
        carrier = e.target
        values: Iterable[Value | None] = [None] if value_type is None else enum_values(value_type, carrier, domain)
        values = list(values)
        for heap in all_heaplets(carrier, table, domain, total=total):
            for v in values:
                h = Hidden(e.rho, heap, v)
                if canonical_only and not is_canonical(h):
                    continue
                yield h
