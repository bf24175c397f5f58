"""Denotational interpreter: programs denote computations of the store monad."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .frontend import ast as A
from .frontend.parser import parse_program_file
from .frontend.typecheck import typecheck_program
from .heaplets import Heaplet
from .hiding import Hidden, canonicalize
from .store import MonadVal, op_get, op_new, op_put, t_bind, t_strength, t_unit
from .values import (
    DEFAULT_SORTS,
    UNIT,
    FunVal,
    Ground,
    HigherOrderError,
    Inl,
    Inr,
    Pair,
    Ref,
    RefVal,
    SortTable,
    TypeExpr,
    Value,
    first_order,
    rename_value,
    tuple_type,
    tuple_value,
    untuple,
)
from .worlds import EMPTY, Injection, World


class EvalError(RuntimeError):
    """Evaluation reached a state that well-typed programs never reach."""


@dataclass(frozen=True)
class Env:
    """Values of the variables in scope, all living at ``world``."""

    world: World
    bindings: Mapping[str, Value] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Value:
        try:
            return self.bindings[name]
        except KeyError:
            raise EvalError(f"unbound variable {name!r}") from None

    def bind(self, **more: Value) -> Env:
        return Env(self.world, {**self.bindings, **more})

    def bind_all(self, names: list[str], values: list[Value]) -> Env:
        return Env(self.world, {**self.bindings, **dict(zip(names, values))})

    def rename(self, sigma: Injection) -> Env:
        if sigma.source != self.world:
            raise EvalError(f"cannot move an environment at {self.world} along {sigma}")
        return Env(sigma.target, {k: rename_value(sigma, v) for k, v in self.bindings.items()})

    def as_value(self) -> Value:
        names = sorted(self.bindings)
        return tuple_value(*[self.bindings[n] for n in names]) if names else UNIT

    def from_value(self, world: World, v: Value) -> Env:
        names = sorted(self.bindings)
        if not names:
            return Env(world, {})
        return Env(world, dict(zip(names, untuple(v, len(names)))))


def eval_value(v: Any, env: Env) -> Value:
    if isinstance(v, A.Var):
        return env[v.name]
    if isinstance(v, A.UnitLit):
        return UNIT
    if isinstance(v, A.IntLit):
        return Ground(v.value)
    if isinstance(v, A.LocLit):
        return RefVal(v.loc, env.world.sort_of(v.loc))
    if isinstance(v, A.PairV):
        return Pair(eval_value(v.fst, env), eval_value(v.snd, env))
    if isinstance(v, A.InlV):
        return Inl(eval_value(v.val, env))
    if isinstance(v, A.InrV):
        return Inr(eval_value(v.val, env))
    if isinstance(v, A.Ascribe):
        return eval_value(v.val, env)
    if isinstance(v, A.Fun):
        home = env

        def apply(sigma: Injection, arg: Value) -> MonadVal:
            return eval_comp(v.body, home.rename(sigma).bind(**{v.param: arg}))

        return FunVal(env.world, Injection.identity(env.world), apply, label=f"<fun {v.param}>")
    raise EvalError(f"not a value term: {v!r}")


def eval_comp(c: Any, env: Env) -> MonadVal:
    w = env.world
    if isinstance(c, A.Ret):
        return t_unit(eval_value(c.val, env), None, w)
    if isinstance(c, A.Let):
        first = eval_comp(c.bound, env)
        return t_bind(first, lambda sigma, x: eval_comp(c.body, env.rename(sigma).bind(**{c.name: x})), None)
    if isinstance(c, A.App):
        fn = eval_value(c.fn, env)
        if not isinstance(fn, FunVal):
            raise EvalError(f"applying a non-function {fn}")
        return fn(eval_value(c.arg, env))
    if isinstance(c, A.Case):
        scrut = eval_value(c.scrut, env)
        if isinstance(scrut, Inl):
            return eval_comp(c.left, env.bind(**{c.left_name: scrut.val}))
        if isinstance(scrut, Inr):
            return eval_comp(c.right, env.bind(**{c.right_name: scrut.val}))
        raise EvalError(f"case on a non-sum {scrut}")
    if isinstance(c, A.Match):
        scrut = eval_value(c.scrut, env)
        if not isinstance(scrut, Pair):
            raise EvalError(f"match on a non-pair {scrut}")
        return eval_comp(c.body, env.bind(**{c.fst_name: scrut.fst, c.snd_name: scrut.snd}))
    if isinstance(c, A.Init):
        raise EvalError("init reached: the empty type has no values")
    if isinstance(c, A.Deref):
        return op_get(eval_value(c.ref, env), w, None)
    if isinstance(c, A.Assign):
        return op_put(eval_value(c.ref, env), eval_value(c.val, env), w)
    if isinstance(c, A.Letref):
        return _letref(c, env)
    raise EvalError(f"not a computation term: {c!r}")


def _letref(c: A.Letref, env: Env) -> MonadVal:
    names = [b.name for b in c.bindings]
    sorts = [b.sort for b in c.bindings]
    if any(s is None for s in sorts):
        raise EvalError("letref sorts must be elaborated by the typechecker first")

    def initializers(sigma: Injection, refs: list[RefVal]) -> list[Value]:
        inner = env.rename(sigma).bind_all(names, refs)
        return [eval_value(b.init, inner) for b in c.bindings]

    fresh = op_new(sorts, initializers, env.world, tuple_type(*[Ref(s) for s in sorts]))
    paired = t_strength(env.as_value(), None, fresh)

    def continuation(sigma: Injection, pair: Value) -> MonadVal:
        inner = env.from_value(sigma.target, pair.fst)
        refs = untuple(pair.snd, len(names))
        return eval_comp(c.body, inner.bind_all(names, refs))

    return t_bind(paired, continuation, None)


# ---------------------------------------------------------------- closed programs


@dataclass(frozen=True)
class Outcome:
    type: TypeExpr
    result: Hidden

    def __str__(self) -> str:
        return f"type {self.type}; {self.result}"


def run_closed(term: Any, sorts: SortTable) -> Outcome:
    """Typecheck, evaluate at the empty world on the empty heap, canonicalize."""
    t, elaborated = typecheck_program(term, sorts)
    if not first_order(t):
        raise HigherOrderError(f"result type {t} is higher order and has no canonical form")
    m = eval_comp(elaborated, Env(EMPTY, {}))
    raw = m.run(Injection.identity(EMPTY), Heaplet.empty(EMPTY))
    return Outcome(t, canonicalize(raw))


def run_source(text: str, sorts: SortTable | None = None) -> Outcome:
    """Run a ``.gsl`` source: its ``sort`` header extends ``sorts``."""
    source = parse_program_file(text)
    return run_closed(source.body, merge_sorts(sorts, source.sorts))


def merge_sorts(base: SortTable | None, extra: Any) -> SortTable:
    base = DEFAULT_SORTS if base is None else base
    if not extra:
        return base
    entries = dict(base.entries)
    entries.update(dict(extra))
    return SortTable(tuple(entries.items()))


def program_denotation(term: Any, sorts: SortTable, ctx: list[tuple[str, Any]], env: Env) -> MonadVal:
    """Denotation of an open program at ``env``."""
    _, elaborated = typecheck_program(term, sorts, ctx)
    return eval_comp(elaborated, env)
