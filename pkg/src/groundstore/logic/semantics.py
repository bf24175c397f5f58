"""Satisfaction ``s, rho, eta |= phi`` of the hiding-aware separation logic, within bounds.

States are normalised by naturality: ``s, rho, eta |= phi`` iff
``(rename rho s), id, eta |= phi``, so the clause evaluator only ever sees a
fully public heaplet over the world the environment lives at.  Memoisation
goes one step further and shrinks the state to the cells mentioned by the
free variables of the formula, canonicalising the rest away; this is again
an instance of naturality plus invariance under the hiding quotient, and can
be switched off (``normalize=False``) to test exactly those two facts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, fields, is_dataclass
from typing import Any, Iterable, Mapping

from ..frontend import ast as A
from ..heaplets import Heaplet, all_heaplets, pcm_mult, splits, transport
from ..hiding import Hidden, all_hidden, canonicalize
from ..initializations import fresh_extensions, hhat_apply
from ..interpreter import Env, eval_value
from ..values import (
    HigherOrderError,
    RefVal,
    SortTable,
    TypeExpr,
    Value,
    enum_values,
    first_order,
    locations,
    ref_sorts,
    relabel,
    rename_value,
)
from ..worlds import Injection, World, WorldError, inj_compose
from .bounds import Bounds


class LogicError(RuntimeError):
    """A formula was evaluated outside its typing contract."""


_tokens = itertools.count()
_ATOMIC = (A.Top, A.Bot, A.PointsTo, A.Eq)


@dataclass(frozen=True, eq=False)
class PredTable:
    """A materialised predicate over ``arg_type`` at world ``home``.

    ``entries`` maps canonical keys ``(rho: home -> w', value, heaplet)`` to
    membership; keys outside the table get ``default`` (false for least,
    true for greatest fixpoints).
    """

    home: World
    arg_type: TypeExpr
    entries: Mapping[Hidden, bool]
    default: bool
    token: int = field(default_factory=lambda: next(_tokens))

    def members(self) -> list[Hidden]:
        return [k for k, v in self.entries.items() if v]


@dataclass(frozen=True)
class PredRef:
    """A predicate table seen from a later world along ``via: home -> here``."""

    table: PredTable
    via: Injection

    def lookup(self, value: Value, heap: Heaplet) -> bool:
        key = canonicalize(Hidden(self.via, heap, value))
        return self.table.entries.get(key, self.table.default)

    def rename(self, sigma: Injection) -> PredRef:
        return PredRef(self.table, inj_compose(sigma, self.via))


@dataclass(frozen=True)
class LEnv:
    """Values and predicates in scope, all living at ``world``."""

    world: World
    values: Mapping[str, Value] = field(default_factory=dict)
    preds: Mapping[str, PredRef] = field(default_factory=dict)

    def rename(self, sigma: Injection) -> LEnv:
        if sigma.source != self.world:
            raise WorldError(f"cannot move an environment at {self.world} along {sigma}")
        return LEnv(
            sigma.target,
            {k: rename_value(sigma, v) for k, v in self.values.items()},
            {k: p.rename(sigma) for k, p in self.preds.items()},
        )

    def bind(self, name: str, value: Value) -> LEnv:
        return LEnv(self.world, {**self.values, name: value}, self.preds)

    def bind_pred(self, name: str, pred: PredRef) -> LEnv:
        return LEnv(self.world, self.values, {**self.preds, name: pred})

    def value_env(self) -> Env:
        return Env(self.world, self.values)


# ---------------------------------------------------------------- free variables


def _value_vars(v: Any, out: set[str]) -> None:
    if isinstance(v, A.Var):
        out.add(v.name)
        return
    if is_dataclass(v) and not isinstance(v, type):
        for f in fields(v):
            child = getattr(v, f.name)
            if isinstance(child, tuple):
                for c in child:
                    _value_vars(c, out)
            else:
                _value_vars(child, out)


def free_vars(phi: Any) -> tuple[frozenset[str], frozenset[str]]:
    """Free value variables and free predicate variables of a formula."""
    if isinstance(phi, (A.Top, A.Bot)):
        return frozenset(), frozenset()
    if isinstance(phi, (A.And, A.Or, A.Imp, A.Star, A.Wand)):
        t1, p1 = free_vars(phi.left)
        t2, p2 = free_vars(phi.right)
        return t1 | t2, p1 | p2
    if isinstance(phi, (A.PointsTo, A.Eq)):
        out: set[str] = set()
        _value_vars(phi.left if isinstance(phi, A.Eq) else phi.ref, out)
        _value_vars(phi.right if isinstance(phi, A.Eq) else phi.val, out)
        return frozenset(out), frozenset()
    if isinstance(phi, (A.Exists, A.Forall, A.Abs)):
        t, p = free_vars(phi.body)
        return t - {phi.name}, p
    if isinstance(phi, A.PVar):
        return frozenset(), frozenset({phi.name})
    if isinstance(phi, A.PredApp):
        t, p = free_vars(phi.pred)
        out = set()
        _value_vars(phi.arg, out)
        return t | out, p
    if isinstance(phi, A.Fix):
        t, p = free_vars(phi.body)
        return t - {phi.name}, p - {phi.pname}
    raise LogicError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------- the checker


class Checker:
    """Bounded satisfaction for one sort table and one set of bounds."""

    def __init__(self, sorts: SortTable, bounds: Bounds | None = None, normalize: bool = True) -> None:
        self.sorts = sorts
        self.bounds = bounds or Bounds()
        self.domain = self.bounds.domain
        # the naive clause is not natural, so it is evaluated on the literal state
        self.normalize = normalize and not self.bounds.naive_implication
        self._memo: dict[Any, bool] = {}
        self._fv: dict[int, tuple[frozenset[str], frozenset[str]]] = {}
        self._alive: list[Any] = []  # nodes whose id() is used as a key
        self._fix_cache: dict[Any, PredRef] = {}
        self._universes: dict[Any, list[Hidden]] = {}
        self.fixpoint_rounds: dict[int, int] = {}

    # ------------------------------------------------------------ entry points

    def sat(self, phi: Any, env: LEnv, heap: Heaplet) -> bool:
        """``env, id, heap |= phi`` with ``heap`` over the environment's world."""
        if heap.over != env.world:
            raise WorldError("the heaplet must live over the environment's world")
        if isinstance(phi, _ATOMIC):
            return self._clause(phi, env, heap)
        terms, preds = self._restrict(phi, env)
        raw = (id(phi), self._signature(env, terms, preds), heap)
        cached = self._memo.get(raw)
        if cached is None:
            key, env1, heap1 = self._normal(phi, env, heap)
            cached = self._memo.get(key)
            if cached is None:
                cached = self._clause(phi, env1, heap1)
                self._memo[key] = cached
            self._memo[raw] = cached
        return cached

    def sat_at(self, phi: Any, env: LEnv, rho: Injection, heap: Heaplet) -> bool:
        """``env, rho, heap |= phi`` for ``rho`` out of the environment's world."""
        return self.sat(phi, env.rename(rho), heap)

    def sat_hidden(self, phi: Any, env: LEnv, h: Hidden) -> bool:
        return self.sat_at(phi, env, h.rho, h.heap)

    def apply_pred(self, pred: Any, env: LEnv, arg: Value, heap: Heaplet) -> bool:
        """``env, id, (arg, heap) |= pred`` for a predicate-typed formula."""
        if isinstance(pred, A.Abs):
            return self.sat(pred.body, env.bind(pred.name, arg), heap)
        if isinstance(pred, A.PVar):
            ref = env.preds.get(pred.name)
            if ref is None:
                raise LogicError(f"unbound predicate {pred.name!r}")
            return ref.lookup(arg, heap)
        if isinstance(pred, A.Fix):
            return self.fixpoint(pred, env).lookup(arg, heap)
        raise LogicError(f"not a predicate: {pred!r}")

    # ------------------------------------------------------------ normalisation

    def _free(self, phi: Any) -> tuple[frozenset[str], frozenset[str]]:
        fv = self._fv.get(id(phi))
        if fv is None:
            fv = free_vars(phi)
            self._fv[id(phi)] = fv
            self._alive.append(phi)
        return fv

    def _restrict(self, phi: Any, env: LEnv) -> tuple[list[str], list[str]]:
        terms, preds = self._free(phi)
        return sorted(n for n in terms if n in env.values), sorted(n for n in preds if n in env.preds)

    @staticmethod
    def _signature(env: LEnv, terms: list[str], preds: list[str]) -> tuple:
        return (
            tuple((n, env.values[n]) for n in terms),
            tuple((n, env.preds[n].table.token, env.preds[n].via.pairs) for n in preds),
        )

    def _shrink(self, env: LEnv, terms: list[str], preds: list[str]) -> tuple[LEnv, Injection]:
        """The environment restricted to ``terms``/``preds`` at the world of the cells they mention."""
        order: list[int] = []
        for n in terms:
            for r in locations(env.values[n]):
                if r.loc not in order:
                    order.append(r.loc)
        for n in preds:
            via = env.preds[n].via
            for loc in via.source:
                if via(loc) not in order:
                    order.append(via(loc))
        small = World.from_sorts(env.world.sort_of(loc) for loc in order)
        iota = Injection.of(small, env.world, dict(enumerate(order)))
        back = {loc: i for i, loc in enumerate(order)}
        values = {n: relabel(back, env.values[n]) for n in terms}
        preds_ = {}
        for n in preds:
            ref = env.preds[n]
            preds_[n] = PredRef(ref.table, Injection.of(ref.table.home, small, {h: back[ref.via(h)] for h in ref.via.source}))
        return LEnv(small, values, preds_), iota

    def _normal(self, phi: Any, env: LEnv, heap: Heaplet) -> tuple[Any, LEnv, Heaplet]:
        terms, preds = self._restrict(phi, env)
        if not self.normalize:
            env1 = LEnv(env.world, {n: env.values[n] for n in terms}, {n: env.preds[n] for n in preds})
            return (id(phi), self._signature(env1, terms, preds), heap), env1, heap
        small, iota = self._shrink(env, terms, preds)
        c = canonicalize(Hidden(iota, heap))
        key = (id(phi), self._signature(small, terms, preds), c, "normal")
        return key, small.rename(c.rho), c.heap

    # ------------------------------------------------------------ clauses

    def _value(self, v: Any, env: LEnv) -> Value:
        return eval_value(v, env.value_env())

    def _check_domain(self, t: TypeExpr) -> None:
        if not first_order(t):
            raise HigherOrderError(f"quantifier domain {t} is higher order")

    def _extensions(self, w: World, fills: str):
        k = self.bounds.max_extra_cells
        return fresh_extensions(w, self.sorts.sorts, k, self.sorts, self.domain, fills=fills)

    def _clause(self, phi: Any, env: LEnv, heap: Heaplet) -> bool:
        if isinstance(phi, A.Top):
            return True
        if isinstance(phi, A.Bot):
            return False
        if isinstance(phi, A.And):
            return self.sat(phi.left, env, heap) and self.sat(phi.right, env, heap)
        if isinstance(phi, A.Or):
            return self.sat(phi.left, env, heap) or self.sat(phi.right, env, heap)
        if isinstance(phi, A.Imp):
            return self._implication(phi, env, heap)
        if isinstance(phi, A.Star):
            return any(
                self.sat(phi.left, env, h1) and self.sat(phi.right, env, h2) for h1, h2 in splits(heap)
            )
        if isinstance(phi, A.Wand):
            return self._wand(phi, env, heap)
        if isinstance(phi, A.PointsTo):
            ref = self._value(phi.ref, env)
            if not isinstance(ref, RefVal):
                raise LogicError(f"{ref} is not a reference")
            content = heap.table.get(ref.loc)
            return content is not None and content == self._value(phi.val, env)
        if isinstance(phi, A.Eq):
            return self._value(phi.left, env) == self._value(phi.right, env)
        if isinstance(phi, A.Exists):
            return self._quantifier(phi, env, heap, existential=True)
        if isinstance(phi, A.Forall):
            return self._quantifier(phi, env, heap, existential=False)
        if isinstance(phi, A.PredApp):
            return self.apply_pred(phi.pred, env, self._value(phi.arg, env), heap)
        if isinstance(phi, (A.PVar, A.Abs, A.Fix)):
            raise LogicError("a predicate is not a proposition; apply it to an argument")
        raise LogicError(f"not a formula: {phi!r}")

    def _implication(self, phi: A.Imp, env: LEnv, heap: Heaplet) -> bool:
        if self.bounds.naive_implication:
            futures = [(env, heap)]
        else:
            # representatives of the class of (id, heap): the carrier plus fresh private cells
            futures = [(env.rename(e.rho), transport(heap, e.rho)) for e in self._extensions(env.world, "none")]
        for env2, base in futures:
            for bigger in all_heaplets(env2.world, self.sorts, self.domain, base=base):
                if self.sat(phi.left, env2, bigger) and not self.sat(phi.right, env2, bigger):
                    return False
        return True

    def _wand(self, phi: A.Wand, env: LEnv, heap: Heaplet) -> bool:
        # unfilled fresh cells suffice by Monotonicity; literal mode also tries every fill
        fills = "none" if self.bounds.fills == "monotone" else "partial"
        for e in self._extensions(env.world, fills):
            env2 = env.rename(e.rho)
            h1 = hhat_apply(e, heap)
            free = [loc for loc in e.target if loc not in h1.table]
            for h2 in all_heaplets(e.target, self.sorts, self.domain, locs=free):
                if self.sat(phi.left, env2, h2) and not self.sat(phi.right, env2, pcm_mult(h1, h2)):
                    return False
        return True

    def _quantifier(self, phi: Any, env: LEnv, heap: Heaplet, existential: bool) -> bool:
        self._check_domain(phi.type)
        if self.bounds.fills == "literal":
            fills = "partial"
        else:
            fills = "total" if existential else "none"
        for e in self._extensions(env.world, fills):
            env2 = env.rename(e.rho)
            h2 = hhat_apply(e, heap)
            for a in enum_values(phi.type, e.target, self.domain):
                if self.sat(phi.body, env2.bind(phi.name, a), h2) == existential:
                    return existential
        return not existential

    # ------------------------------------------------------------ fixpoints

    def _closure_sorts(self, w: World, t: TypeExpr) -> SortTable:
        todo = [s for _, s in w.cells] + sorted(ref_sorts(t))
        seen: list[str] = []
        while todo:
            s = todo.pop()
            if s in seen:
                continue
            seen.append(s)
            todo.extend(sorted(ref_sorts(self.sorts.ctype(s))))
        return SortTable(tuple((s, self.sorts.ctype(s)) for s in self.sorts.sorts if s in seen))

    def universe(self, home: World, t: TypeExpr) -> list[Hidden]:
        """Canonical keys ``(home -> w', value, heaplet)`` with at most ``max_world`` private cells."""
        key = (home, t)
        if key not in self._universes:
            table = self._closure_sorts(home, t)
            self._universes[key] = list(
                all_hidden(home, table, self.domain, self.bounds.max_world, value_type=t, canonical_only=True)
            )
        return self._universes[key]

    def fixpoint(self, fix: A.Fix, env: LEnv) -> PredRef:
        """The fixpoint table of ``fix`` in ``env``, seen at the environment's world."""
        self._check_domain(fix.type)
        terms, preds = self._restrict(fix, env)
        home_env, iota = self._shrink(env, terms, preds)
        self._free(fix)
        cache_key = (id(fix), self._signature(home_env, terms, preds))
        cached = self._fix_cache.get(cache_key)
        if cached is None:
            table = self._iterate(fix, home_env)
            cached = PredRef(table, Injection.identity(home_env.world))
            self._fix_cache[cache_key] = cached
        return PredRef(cached.table, iota)

    def unfold(self, fix: A.Fix, env: LEnv, table: PredTable, settled: bool | None = None) -> dict[Hidden, bool]:
        """One application of the body's functional to ``table`` over the universe.

        Keys whose current membership equals ``settled`` are copied, not
        recomputed: along a Kleene chain of a monotone functional they cannot
        change (true stays true going up from the empty table, false stays
        false going down from the full one).
        """
        out = {}
        for key in self.universe(table.home, fix.type):
            if settled is not None and table.entries[key] == settled:
                out[key] = settled
                continue
            inner = env.rename(key.rho).bind(fix.name, key.value).bind_pred(fix.pname, PredRef(table, key.rho))
            out[key] = self.sat(fix.body, inner, key.heap)
        return out

    def _iterate(self, fix: A.Fix, home_env: LEnv) -> PredTable:
        least = fix.kind == "mu"
        keys = self.universe(home_env.world, fix.type)
        current = PredTable(home_env.world, fix.type, {k: not least for k in keys}, default=not least)
        rounds = 0
        while True:
            rounds += 1
            step = self.unfold(fix, home_env, current, settled=least)
            if step == dict(current.entries):
                break
            current = PredTable(home_env.world, fix.type, step, default=not least)
        self.fixpoint_rounds[current.token] = rounds
        return current


# ---------------------------------------------------------------- conveniences


def env_of(world: World, values: Mapping[str, Value] | Iterable[tuple[str, Value]] = ()) -> LEnv:
    return LEnv(world, dict(values))


def satisfies(
    phi: Any,
    sorts: SortTable,
    env: LEnv,
    heap: Heaplet,
    rho: Injection | None = None,
    bounds: Bounds | None = None,
) -> bool:
    checker = Checker(sorts, bounds)
    return checker.sat_at(phi, env, rho or Injection.identity(env.world), heap)
