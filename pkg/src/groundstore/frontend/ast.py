"""Abstract syntax of programs and formulas.

Every node carries an optional source ``span`` that is ignored by equality, so
re-parsing printed syntax yields equal trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

Span = tuple[int, int] | None


def _span() -> Any:
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- value terms


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class UnitLit:
    span: Span = _span()


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class LocLit:
    """``#k``: only admitted in literal mode (heaplet and environment literals)."""

    loc: int
    span: Span = _span()


@dataclass(frozen=True)
class PairV:
    fst: Any
    snd: Any
    span: Span = _span()


@dataclass(frozen=True)
class InlV:
    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class InrV:
    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class Fun:
    param: str
    ptype: Any
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class Ascribe:
    """``(v : A)``."""

    val: Any
    type: Any
    span: Span = _span()


ValueTerm = Var | UnitLit | IntLit | LocLit | PairV | InlV | InrV | Fun | Ascribe


# ---------------------------------------------------------------- computations


@dataclass(frozen=True)
class Ret:
    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class Let:
    name: str
    bound: Any
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class App:
    fn: Any
    arg: Any
    span: Span = _span()


@dataclass(frozen=True)
class Case:
    scrut: Any
    left_name: str
    left: Any
    right_name: str
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Match:
    scrut: Any
    fst_name: str
    snd_name: str
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class Init:
    """Eliminator of the empty type."""

    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class Assign:
    ref: Any
    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class Deref:
    ref: Any
    span: Span = _span()


@dataclass(frozen=True)
class Binding:
    name: str
    sort: str | None
    init: Any
    span: Span = _span()


@dataclass(frozen=True)
class Letref:
    bindings: tuple[Binding, ...]
    body: Any
    span: Span = _span()


Comp = Ret | Let | App | Case | Match | Init | Assign | Deref | Letref


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Top:
    span: Span = _span()


@dataclass(frozen=True)
class Bot:
    span: Span = _span()


@dataclass(frozen=True)
class And:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Or:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Imp:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Star:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Wand:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class PointsTo:
    ref: Any
    val: Any
    span: Span = _span()


@dataclass(frozen=True)
class Eq:
    left: Any
    right: Any
    span: Span = _span()


@dataclass(frozen=True)
class Exists:
    name: str
    type: Any
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class Forall:
    name: str
    type: Any
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class PVar:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Abs:
    """Predicate abstraction ``fun (x:A). phi``."""

    name: str
    type: Any
    body: Any
    span: Span = _span()


@dataclass(frozen=True)
class PredApp:
    pred: Any
    arg: Any
    span: Span = _span()


@dataclass(frozen=True)
class Fix:
    """``mu P(x:A). body`` (least) or ``nu P(x:A). body`` (greatest)."""

    kind: str
    pname: str
    name: str
    type: Any
    body: Any
    span: Span = _span()


Formula = Top | Bot | And | Or | Imp | Star | Wand | PointsTo | Eq | Exists | Forall | PVar | Abs | PredApp | Fix


@dataclass(frozen=True)
class PredType:
    """The type ``pred A`` of predicates over ``A``."""

    arg: Any

    def __str__(self) -> str:
        return f"pred {_type_atom(self.arg)}"


def _type_atom(t: Any) -> str:
    from ..values import Arrow, Prod, Sum

    return f"({t})" if isinstance(t, (Arrow, Prod, Sum)) else str(t)


def negate(phi: Any) -> Imp:
    return Imp(phi, Bot())


@dataclass(frozen=True)
class Entailment:
    lhs: Any
    rhs: Any


@dataclass(frozen=True)
class Source:
    """A parsed file: sort declarations, a typing context and a body."""

    sorts: tuple[tuple[str, Any], ...]
    context: tuple[tuple[str, Any], ...]
    body: Any
