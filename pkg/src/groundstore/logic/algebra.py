"""The BI-algebra of upward-closed predicates, materialised on truncated universes.

At each public world ``w`` the universe is the set of canonical classes
``(rho: w -> w', heaplet)`` whose carrier has at most ``max_carrier`` cells.
Predicates are bitmasks over it.  The truncation is closed under every
operation used here: splitting a heaplet, extending it on its carrier,
adding private garbage cells up to the cap, and hiding public cells all keep
the carrier size, so the laws can be checked exactly on the finite slices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from ..heaplets import all_heaplets, pcm_mult, splits
from ..hiding import Hidden, all_hidden, canonicalize, forward, hide
from ..initializations import fresh_extensions
from ..values import SortTable, all_worlds
from ..worlds import Injection, World, injections
from .report import Report


@dataclass
class Universe:
    world: World
    keys: list[Hidden]
    index: dict[Hidden, int]
    up: list[int] = field(default_factory=list)  # up[i]: mask of classes >= i
    split_pairs: list[list[tuple[int, int]]] = field(default_factory=list)
    wand_pairs: list[list[tuple[int, int]]] = field(default_factory=list)

    @property
    def full(self) -> int:
        return (1 << len(self.keys)) - 1

    def members(self, mask: int) -> list[Hidden]:
        return [k for i, k in enumerate(self.keys) if mask >> i & 1]

    def describe(self, mask: int) -> str:
        return "{" + "; ".join(str(k) for k in self.members(mask)) + "}"


def _reps(c: Hidden, sorts: SortTable, domain: range, max_carrier: int) -> Iterator[Hidden]:
    """``c`` plus unfilled private garbage cells, up to the carrier cap."""
    room = max_carrier - len(c.carrier)
    for e in fresh_extensions(c.carrier, sorts.sorts, room, sorts, domain, fills="none"):
        yield forward(e, c)


def build_universe(w: World, sorts: SortTable, domain: range, max_carrier: int) -> Universe:
    keys = list(all_hidden(w, sorts, domain, max_carrier - len(w), canonical_only=True))
    index = {k: i for i, k in enumerate(keys)}
    u = Universe(w, keys, index)

    def cls(rho: Injection, heap) -> int:
        return index[canonicalize(Hidden(rho, heap))]

    reps = [list(_reps(k, sorts, domain, max_carrier)) for k in keys]
    # the order: extend any representative on its carrier, then close transitively
    up = []
    for i, k in enumerate(keys):
        mask = 0
        for r in reps[i]:
            for bigger in all_heaplets(r.carrier, sorts, domain, base=r.heap):
                mask |= 1 << cls(r.rho, bigger)
        up.append(mask)
    changed = True
    while changed:
        changed = False
        for i in range(len(keys)):
            closed = up[i]
            for j in range(len(keys)):
                if up[i] >> j & 1:
                    closed |= up[j]
            if closed != up[i]:
                up[i], changed = closed, True
    u.up = up
    u.split_pairs = [
        sorted({(cls(k.rho, h1), cls(k.rho, h2)) for h1, h2 in splits(k.heap)}) for k in keys
    ]
    wand = []
    for i, k in enumerate(keys):
        pairs = set()
        for r in reps[i]:
            free = [loc for loc in r.carrier if loc not in r.heap.table]
            for h2 in all_heaplets(r.carrier, sorts, domain, locs=free):
                pairs.add((cls(r.rho, h2), cls(r.rho, pcm_mult(r.heap, h2))))
        wand.append(sorted(pairs))
    u.wand_pairs = wand
    return u


NO_UCL_SAMPLE = 64

# ---------------------------------------------------------------- operations


def ucl(u: Universe, mask: int) -> int:
    out = 0
    for i in range(len(u.keys)):
        if mask >> i & 1:
            out |= u.up[i]
    return out


def ucl_op(raw: Iterable[Hidden], sorts: SortTable, domain: range, max_carrier: int) -> set[Hidden]:
    """Smallest upward-closed set (of canonical classes, carrier <= ``max_carrier``) containing ``raw``."""
    raw = [canonicalize(h) for h in raw]
    if not raw:
        return set()
    u = build_universe(raw[0].public, sorts, domain, max_carrier)
    mask = 0
    for h in raw:
        mask |= 1 << u.index[h]
    return set(u.members(ucl(u, mask)))


def is_upset(u: Universe, mask: int) -> bool:
    return ucl(u, mask) == mask


def star(u: Universe, p: int, q: int) -> int:
    out = 0
    for i, pairs in enumerate(u.split_pairs):
        if any(p >> a & 1 and q >> b & 1 for a, b in pairs):
            out |= 1 << i
    return out


def wand(u: Universe, p: int, q: int) -> int:
    out = 0
    for i, pairs in enumerate(u.wand_pairs):
        if all(not p >> a & 1 or q >> b & 1 for a, b in pairs):
            out |= 1 << i
    return out


def hiding_map(v: Universe, w: Universe, sigma: Injection) -> list[int]:
    """For each class at ``w``, the index of its hiding along ``sigma: v -> w``."""
    return [v.index[canonicalize(hide(sigma, k))] for k in w.keys]


def pull(along: list[int], p: int) -> int:
    """Predicate of the classes whose hiding (given by ``along``) lies in ``p``."""
    out = 0
    for i, j in enumerate(along):
        if p >> j & 1:
            out |= 1 << i
    return out


def upsets(u: Universe) -> list[int]:
    """Every upward-closed subset, as masks in increasing order."""
    n = len(u.keys)
    down = [sum(1 << j for j in range(n) if u.up[j] >> i & 1) for i in range(n)]
    out: set[int] = set()

    # an upset is determined by its set of minimal elements (an antichain)
    def go(start: int, chosen: int, blocked: int) -> None:
        out.add(ucl(u, chosen))
        for i in range(start, n):
            if not blocked >> i & 1:
                go(i + 1, chosen | 1 << i, blocked | u.up[i] | down[i])

    go(0, 0, 0)
    return sorted(out)


def _sample(items: list[int], limit: int | None, rng: random.Random) -> list[int]:
    if limit is None or len(items) <= limit:
        return items
    return sorted(rng.sample(items, limit))


# ---------------------------------------------------------------- the suite


def _algebra_laws(report: Report, w: World, u: Universe, ps: list[int], ucl_only: bool) -> None:
    """The laws at one world, over index tables of ``*`` so the triple loops stay cheap."""
    n = len(ps)
    pos = {p: i for i, p in enumerate(ps)}
    table = [[star(u, p, q) for q in ps] for p in ps]

    def st(a: int, b: int) -> int:
        ia, ib = pos.get(a), pos.get(b)
        return table[ia][ib] if ia is not None and ib is not None else star(u, a, b)

    def show(*masks: int) -> str:
        return f"at {w}: " + " ".join(f"{name}={u.describe(m)}" for name, m in zip("PQR", masks))

    for i, p in enumerate(ps):
        report.law("unit").check(st(p, u.full) == p, lambda: f"at {w}: P * true != P for P = {u.describe(p)}")
        for j, q in enumerate(ps):
            pq = table[i][j]
            report.law("commutativity").check(pq == table[j][i], lambda: show(p, q))
            if ucl_only:
                report.law("star preserves upsets").check(is_upset(u, pq), lambda: show(p, q))
                report.law("wand preserves upsets").check(is_upset(u, wand(u, p, q)), lambda: show(p, q))

    # (P * Q) * R = P * (Q * R), row by row over R
    assoc = report.law("associativity")
    for i, p in enumerate(ps):
        for j, q in enumerate(ps):
            pq = table[i][j]
            left = table[pos[pq]] if pq in pos else [star(u, pq, r) for r in ps]
            right = [st(p, table[j][k]) for k in range(n)]
            bad = [k for k in range(n) if left[k] != right[k]]
            assoc.bulk(n, [lambda p=p, q=q, r=ps[k]: show(p, q, r) for k in bad])

    # P * R <= Q  iff  R <= P -* Q
    adj = report.law("adjunction")
    for i, p in enumerate(ps):
        row = table[i]
        for q in ps:
            wq = wand(u, p, q)
            bad = [k for k in range(n) if (row[k] & ~q == 0) != (ps[k] & ~wq == 0)]
            adj.bulk(n, [lambda p=p, q=q, r=ps[k]: show(p, q, r) for k in bad])



def bi_suite(
    sorts: SortTable,
    domain: range = range(0, 2),
    max_public: int = 2,
    max_carrier: int = 3,
    ucl_only: bool = True,
    max_preds: int | None = None,
    seed: int = 0,
) -> Report:
    """Commutativity, associativity, unit, adjunction, upset preservation and naturality under hiding.

    With ``ucl_only=False`` the laws are checked on *all* subsets instead of
    upward-closed ones; the unit law then fails (``true`` is not a unit for
    ``*`` on arbitrary subsets), which is why predicates must be upward closed.
    Worlds with more than ``max_preds`` predicates are sampled (seeded); all
    subsets are always sampled, at most ``NO_UCL_SAMPLE`` per world by default.
    """
    rng = random.Random(seed)
    if not ucl_only and max_preds is None:
        max_preds = NO_UCL_SAMPLE
    report = Report(
        "bi",
        {
            "max_public": max_public,
            "max_carrier": max_carrier,
            "int_domain": f"{domain.start}..{domain.stop - 1}",
            "predicates": "upward-closed" if ucl_only else "all subsets",
            "max_preds": max_preds,
            "seed": seed,
        },
    )
    universes = {w: build_universe(w, sorts, domain, max_carrier) for w in all_worlds(sorts.sorts, max_public)}
    preds: dict[World, list[int]] = {}
    for w, u in universes.items():
        pool = upsets(u) if ucl_only else list(range(u.full + 1))
        preds[w] = _sample(pool, max_preds, rng)
        report.notes.append(f"world {w}: {len(u.keys)} classes, {len(pool)} predicates, {len(preds[w])} checked")

    for w, u in universes.items():
        _algebra_laws(report, w, u, preds[w], ucl_only)

    for v, uv in universes.items():
        for w, uw in universes.items():
            for sigma in injections(v, w):
                along = hiding_map(uv, uw, sigma)
                # wand quantifies over garbage up to the carrier cap, so compare it
                # only where hiding collects no cells and both sides have equal room
                kept = sum(
                    1 << i for i, j in enumerate(along) if len(uv.keys[j].carrier) == len(uw.keys[i].carrier)
                )
                for p in preds[v]:
                    pulled_p = pull(along, p)
                    if ucl_only:
                        report.law("hiding preserves upsets").check(
                            is_upset(uw, pulled_p), lambda: f"{sigma}: P={uv.describe(p)}"
                        )
                    for q in preds[v]:
                        lhs = pull(along, star(uv, p, q))
                        rhs = star(uw, pulled_p, pull(along, q))
                        report.law("star natural under hiding").check(
                            lhs == rhs, lambda: f"{sigma}: P={uv.describe(p)} Q={uv.describe(q)}"
                        )
                        lhs = pull(along, wand(uv, p, q)) & kept
                        rhs = wand(uw, pulled_p, pull(along, q)) & kept
                        report.law("wand natural under hiding").check(
                            lhs == rhs, lambda: f"{sigma}: P={uv.describe(p)} Q={uv.describe(q)}"
                        )
    return report
