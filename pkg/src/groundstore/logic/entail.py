"""Validity and entailment by exhaustive enumeration of states within bounds."""

from __future__ import annotations

import itertools
from typing import Any, Iterator, Sequence

from ..frontend import ast as A
from ..frontend.parser import parse_env_literal, parse_heaplet_literal
from ..frontend.printer import print_formula
from ..frontend.typecheck import typecheck_formula
from ..heaplets import Heaplet, all_heaplets
from ..interpreter import Env, eval_value
from ..values import HigherOrderError, SortTable, TypeError_, Value, all_worlds, enum_values, first_order, well_typed
from ..worlds import Injection, World
from .bounds import Bounds
from .semantics import Checker, LEnv
from .verdict import Verdict, Witness

Context = Sequence[tuple[str, Any]]


def check_context(ctx: Context) -> None:
    for name, t in ctx:
        if isinstance(t, A.PredType) or not first_order(t):
            raise HigherOrderError(f"context entry {name} : {t} is higher order; only first-order contexts are enumerable")


def expect_prop(phi: Any, sorts: SortTable, ctx: Context) -> None:
    if typecheck_formula(phi, sorts, ctx) != "prop":
        raise TypeError_("expected a proposition, found a predicate")


def states(ctx: Context, sorts: SortTable, bounds: Bounds) -> Iterator[tuple[World, tuple[tuple[str, Value], ...], Heaplet]]:
    """Every ``(world, env, heaplet)`` with at most ``max_world`` cells, in canonical order."""
    domain = bounds.domain
    for w in all_worlds(sorts.sorts, bounds.max_world):
        choices = [enum_values(t, w, domain) for _, t in ctx]
        for combo in itertools.product(*choices):
            env = tuple((name, v) for (name, _), v in zip(ctx, combo))
            for heap in all_heaplets(w, sorts, domain):
                yield w, env, heap


def entails(
    ctx: Context,
    lhs: Any,
    rhs: Any,
    sorts: SortTable,
    bounds: Bounds | None = None,
    checker: Checker | None = None,
) -> Verdict:
    """``lhs |- rhs``: every enumerated state satisfying ``lhs`` satisfies ``rhs``.

    ``rho`` is always the identity: by naturality a state ``(s, rho, eta)``
    behaves like ``(rename rho s, id, eta)``, which is enumerated as well.
    """
    bounds = bounds or Bounds()
    check_context(ctx)
    expect_prop(lhs, sorts, ctx)
    expect_prop(rhs, sorts, ctx)
    checker = checker or Checker(sorts, bounds)
    text = print_formula(rhs) if isinstance(lhs, A.Top) else f"{print_formula(lhs)} |- {print_formula(rhs)}"
    count = 0
    for w, env, heap in states(ctx, sorts, bounds):
        count += 1
        lenv = LEnv(w, dict(env))
        if checker.sat(lhs, lenv, heap) and not checker.sat(rhs, lenv, heap):
            note = "formula fails" if isinstance(lhs, A.Top) else "left side holds, right side fails"
            witness = Witness(w, env, Injection.identity(w), heap, note)
            return Verdict(text, bounds, witness, count)
    return Verdict(text, bounds, None, count)


def check_valid(ctx: Context, phi: Any, sorts: SortTable, bounds: Bounds | None = None, checker: Checker | None = None) -> Verdict:
    return entails(ctx, A.Top(), phi, sorts, bounds, checker)


def check_at(
    ctx: Context,
    phi: Any,
    sorts: SortTable,
    world: World,
    env: dict[str, Value],
    heap: Heaplet,
    bounds: Bounds | None = None,
    rho: Injection | None = None,
) -> Verdict:
    """Satisfaction at one given state, reported as a verdict."""
    bounds = bounds or Bounds()
    expect_prop(phi, sorts, ctx)
    missing = [name for name, _ in ctx if name not in env]
    if missing:
        raise TypeError_(f"no value given for {', '.join(missing)}")
    for name, t in ctx:
        if not well_typed(env[name], t, world, bounds.domain):
            raise TypeError_(f"{name} = {env[name]} is not a value of {t} at {world}")
    rho = rho or Injection.identity(world)
    checker = Checker(sorts, bounds)
    holds = checker.sat_at(phi, LEnv(world, env), rho, heap)
    ordered = tuple((name, env[name]) for name, _ in ctx)
    witness = None if holds else Witness(world, ordered, rho, heap, "formula fails at the given state")
    return Verdict(print_formula(phi), bounds, witness, 1)


def recheck(phi: Any, witness: Witness, sorts: SortTable, bounds: Bounds, lhs: Any = None) -> bool:
    """``True`` iff the witness really refutes ``lhs |- phi`` (``lhs`` defaults to true)."""
    checker = Checker(sorts, bounds)
    env = LEnv(witness.world, dict(witness.env))
    left = True if lhs is None else checker.sat_at(lhs, env, witness.rho, witness.heap)
    return left and not checker.sat_at(phi, env, witness.rho, witness.heap)


# ---------------------------------------------------------------- literals


def load_heaplet(text: str, sorts: SortTable, domain: range | None = None) -> Heaplet:
    layout, cells = parse_heaplet_literal(text)
    world = World.of(layout)
    for _, s in layout:
        sorts.ctype(s)
    env = Env(world, {})
    heap = Heaplet.of(world, {loc: eval_value(v, env) for loc, v in cells})
    heap.check(sorts, domain)
    return heap


def load_env(text: str, world: World) -> dict[str, Value]:
    env = Env(world, {})
    return {name: eval_value(v, env) for name, v in parse_env_literal(text)} if text.strip() else {}
