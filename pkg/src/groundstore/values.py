"""Types, the sort table, and values interpreted over worlds.

A type ``A`` denotes a presheaf on worlds: ``[[A]] w`` is the set of values of
type ``A`` whose references point into ``w``; injections act by relabelling
references (``rename_value``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping

from .worlds import Injection, World, inj_compose


class TypeError_(TypeError):
    """Ill-typed value, type expression or sort declaration."""


class HigherOrderError(TypeError_):
    """An operation needed to enumerate or compare function values."""


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class IntT:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class Prod:
    left: Any
    right: Any

    def __str__(self) -> str:
        return f"{_wrap(self.left, 3)} * {_wrap(self.right, 2)}"


@dataclass(frozen=True)
class Sum:
    left: Any
    right: Any

    def __str__(self) -> str:
        return f"{_wrap(self.left, 2)} + {_wrap(self.right, 1)}"


@dataclass(frozen=True)
class Arrow:
    arg: Any
    res: Any

    def __str__(self) -> str:
        return f"{_wrap(self.arg, 1)} -> {_wrap(self.res, 0)}"


@dataclass(frozen=True)
class Ref:
    sort: str

    def __str__(self) -> str:
        return f"ref {self.sort}"


TypeExpr = Zero | One | IntT | Prod | Sum | Arrow | Ref

_LEVEL = {Arrow: 0, Sum: 1, Prod: 2}


def _wrap(t: TypeExpr, level: int) -> str:
    own = _LEVEL.get(type(t), 9)
    return f"({t})" if own < level else str(t)


def tuple_type(*items: TypeExpr) -> TypeExpr:
    """Right-nested product ``A * (B * C)``."""
    if len(items) == 1:
        return items[0]
    return Prod(items[0], tuple_type(*items[1:]))


def first_order(t: TypeExpr) -> bool:
    if isinstance(t, Arrow):
        return False
    if isinstance(t, (Prod, Sum)):
        return first_order(t.left) and first_order(t.right)
    return True


def ref_sorts(t: TypeExpr) -> set[str]:
    if isinstance(t, Ref):
        return {t.sort}
    if isinstance(t, (Prod, Sum)):
        return ref_sorts(t.left) | ref_sorts(t.right)
    if isinstance(t, Arrow):
        return ref_sorts(t.arg) | ref_sorts(t.res)
    return set()


BOOL = Sum(One(), One())


# ---------------------------------------------------------------- sort table


@dataclass(frozen=True)
class SortTable:
    """Assigns a first-order content type to every cell sort."""

    entries: tuple[tuple[str, TypeExpr], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise TypeError_("duplicate sort declaration")
        for name, t in self.entries:
            if not first_order(t):
                raise TypeError_(f"sort {name}: content type {t} is not first order")
            missing = ref_sorts(t) - set(names)
            if missing:
                raise TypeError_(f"sort {name} mentions undeclared sorts {sorted(missing)}")

    @classmethod
    def of(cls, mapping: Mapping[str, TypeExpr]) -> SortTable:
        return cls(tuple(mapping.items()))

    @property
    def sorts(self) -> list[str]:
        return [n for n, _ in self.entries]

    def ctype(self, sort: str) -> TypeExpr:
        for name, t in self.entries:
            if name == sort:
                return t
        raise TypeError_(f"unknown sort {sort!r}")

    def __contains__(self, sort: object) -> bool:
        return any(n == sort for n, _ in self.entries)

    def __str__(self) -> str:
        return "\n".join(f"sort {n} = {t};" for n, t in self.entries)


DEFAULT_SORTS = SortTable.of({"Int": IntT(), "RInt": Ref("Int")})


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class UnitVal:
    def __str__(self) -> str:
        return "()"


UNIT = UnitVal()


@dataclass(frozen=True)
class Ground:
    n: int

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True)
class Pair:
    fst: Any
    snd: Any

    def __str__(self) -> str:
        items, rest = [self.fst], self.snd
        while isinstance(rest, Pair):
            items.append(rest.fst)
            rest = rest.snd
        items.append(rest)
        return "(" + ", ".join(map(str, items)) + ")"


@dataclass(frozen=True)
class Inl:
    val: Any

    def __str__(self) -> str:
        return f"inl {_atom(self.val)}"


@dataclass(frozen=True)
class Inr:
    val: Any

    def __str__(self) -> str:
        return f"inr {_atom(self.val)}"


@dataclass(frozen=True)
class RefVal:
    loc: int
    sort: str

    def __str__(self) -> str:
        return f"#{self.loc}"


@dataclass(frozen=True, eq=False)
class FunVal:
    """A function value living at the world ``via.target``.

    ``apply(sigma, arg)`` is the behaviour at a future world of the home
    world: ``sigma`` is an injection out of ``home`` and ``arg`` lives at
    ``sigma.target``; it returns a computation at ``sigma.target``.
    Renaming composes onto ``via`` without touching the closure.
    """

    home: World
    via: Injection
    apply: Callable[[Injection, Any], Any] = field(repr=False)
    label: str = "<fun>"

    def __eq__(self, other: object) -> bool:
        raise HigherOrderError("function values cannot be compared")

    def __hash__(self) -> int:
        raise HigherOrderError("function values cannot be hashed")

    def __call__(self, arg: Any) -> Any:
        return self.apply(self.via, arg)

    def __str__(self) -> str:
        return self.label


Value = UnitVal | Ground | Pair | Inl | Inr | RefVal | FunVal


def _atom(v: Value) -> str:
    s = str(v)
    return f"({s})" if isinstance(v, (Inl, Inr)) else s


def tuple_value(*items: Value) -> Value:
    if len(items) == 1:
        return items[0]
    return Pair(items[0], tuple_value(*items[1:]))


def untuple(v: Value, n: int) -> list[Value]:
    out = []
    for _ in range(n - 1):
        out.append(v.fst)
        v = v.snd
    out.append(v)
    return out


def rename_value(rho: Injection, v: Value) -> Value:
    """Functorial action of an injection: relabel every reference."""
    if isinstance(v, RefVal):
        return RefVal(rho(v.loc), v.sort)
    if isinstance(v, (UnitVal, Ground)):
        return v
    if isinstance(v, Pair):
        return Pair(rename_value(rho, v.fst), rename_value(rho, v.snd))
    if isinstance(v, Inl):
        return Inl(rename_value(rho, v.val))
    if isinstance(v, Inr):
        return Inr(rename_value(rho, v.val))
    if isinstance(v, FunVal):
        return FunVal(v.home, inj_compose(rho, v.via), v.apply, v.label)
    raise TypeError_(f"not a value: {v!r}")


def relabel(mapping: Mapping[int, int], v: Value) -> Value:
    """Rename references along a plain location map (no world bookkeeping)."""
    if isinstance(v, RefVal):
        return RefVal(mapping[v.loc], v.sort)
    if isinstance(v, Pair):
        return Pair(relabel(mapping, v.fst), relabel(mapping, v.snd))
    if isinstance(v, Inl):
        return Inl(relabel(mapping, v.val))
    if isinstance(v, Inr):
        return Inr(relabel(mapping, v.val))
    if isinstance(v, FunVal):
        raise HigherOrderError("cannot relabel a function value without its injection")
    return v


def locations(v: Value) -> Iterator[RefVal]:
    """References occurring in ``v``, left to right."""
    if isinstance(v, RefVal):
        yield v
    elif isinstance(v, Pair):
        yield from locations(v.fst)
        yield from locations(v.snd)
    elif isinstance(v, (Inl, Inr)):
        yield from locations(v.val)
    elif isinstance(v, FunVal):
        raise HigherOrderError("function values have no inspectable locations")


def well_typed(v: Value, t: TypeExpr, w: World, domain: range | None = None) -> bool:
    if isinstance(t, One):
        return isinstance(v, UnitVal)
    if isinstance(t, Zero):
        return False
    if isinstance(t, IntT):
        return isinstance(v, Ground) and (domain is None or v.n in domain)
    if isinstance(t, Prod):
        return isinstance(v, Pair) and well_typed(v.fst, t.left, w, domain) and well_typed(v.snd, t.right, w, domain)
    if isinstance(t, Sum):
        if isinstance(v, Inl):
            return well_typed(v.val, t.left, w, domain)
        return isinstance(v, Inr) and well_typed(v.val, t.right, w, domain)
    if isinstance(t, Ref):
        return isinstance(v, RefVal) and v.sort == t.sort and v.loc in w and w.sort_of(v.loc) == t.sort
    if isinstance(t, Arrow):
        return isinstance(v, FunVal) and v.via.target == w
    raise TypeError_(f"unknown type {t!r}")


def enum_values(t: TypeExpr, w: World, domain: range) -> list[Value]:
    """Every element of ``[[t]] w`` in a fixed order (ints restricted to ``domain``)."""
    return list(_enum(t, w, domain))


def _enum(t: TypeExpr, w: World, domain: range) -> Iterator[Value]:
    if isinstance(t, Zero):
        return
    if isinstance(t, One):
        yield UNIT
    elif isinstance(t, IntT):
        yield from (Ground(n) for n in domain)
    elif isinstance(t, Ref):
        yield from (RefVal(loc, t.sort) for loc in w.locs_of_sort(t.sort))
    elif isinstance(t, Sum):
        yield from (Inl(v) for v in _enum(t.left, w, domain))
        yield from (Inr(v) for v in _enum(t.right, w, domain))
    elif isinstance(t, Prod):
        rights = list(_enum(t.right, w, domain))
        for a in _enum(t.left, w, domain):
            for b in rights:
                yield Pair(a, b)
    elif isinstance(t, Arrow):
        raise HigherOrderError(f"higher-order domain {t} cannot be enumerated")
    else:
        raise TypeError_(f"unknown type {t!r}")


def count_values(t: TypeExpr, w: World, domain: range) -> int:
    """Cardinality of ``[[t]] w`` computed structurally."""
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    if isinstance(t, IntT):
        return len(domain)
    if isinstance(t, Ref):
        return len(w.locs_of_sort(t.sort))
    if isinstance(t, Sum):
        return count_values(t.left, w, domain) + count_values(t.right, w, domain)
    if isinstance(t, Prod):
        return count_values(t.left, w, domain) * count_values(t.right, w, domain)
    raise HigherOrderError(f"higher-order domain {t}")


# ---------------------------------------------------------------- sort-table text


_SORT_DECL = re.compile(r"\s*sort\s+([A-Za-z_]\w*)\s*=\s*([^;]+);")


def parse_type(text: str) -> TypeExpr:
    from .frontend.parser import parse_type as _parse

    return _parse(text)


def parse_sort_table(text: str) -> SortTable:
    """Read ``sort Name = <type>;`` declarations (``//`` comments allowed)."""
    body = "\n".join(line.split("//")[0] for line in text.splitlines())
    entries = []
    pos = 0
    for m in _SORT_DECL.finditer(body):
        if body[pos : m.start()].strip():
            raise TypeError_(f"unexpected text in sort table: {body[pos:m.start()].strip()!r}")
        entries.append((m.group(1), parse_type(m.group(2))))
        pos = m.end()
    if body[pos:].strip():
        raise TypeError_(f"unexpected text in sort table: {body[pos:].strip()!r}")
    return SortTable(tuple(entries))


def all_worlds(sorts: Iterable[str], max_cells: int) -> Iterator[World]:
    """Worlds ``{#0..#n-1}`` up to isomorphism: one per multiset of sorts."""
    sorts = list(sorts)
    for n in range(max_cells + 1):
        for combo in itertools.combinations_with_replacement(sorts, n):
            yield World.from_sorts(combo)
