"""Generators of well-typed programs over a context of references, for the law suites.

Programs are produced as source text together with their result type, so every
generated program also exercises the parser and typechecker.  Depth counts
nested computations: ``ret``, ``!x`` and ``x := v`` have depth 1;
``let x = M in N`` has depth ``1 + max(depth M, depth N)`` and
``letref x : S := v in N`` has depth ``1 + depth N``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .values import IntT, One, Ref, SortTable, TypeExpr

Ctx = tuple[tuple[str, TypeExpr], ...]


@dataclass(frozen=True)
class ProgramGen:
    sorts: SortTable
    consts: tuple[int, ...] = (0, 1)

    # ------------------------------------------------------------ pieces

    def values_of(self, t: TypeExpr, ctx: Ctx) -> list[str]:
        """Closed-form values of type ``t``: constants and context variables."""
        out = [str(n) for n in self.consts] if isinstance(t, IntT) else []
        if isinstance(t, One):
            out.append("()")
        out.extend(name for name, u in ctx if u == t)
        return out

    def atoms(self, ctx: Ctx) -> list[tuple[str, TypeExpr]]:
        out: list[tuple[str, TypeExpr]] = [("ret ()", One())]
        out.extend((f"ret {n}", IntT()) for n in self.consts[:1])
        for name, t in ctx:
            out.append((f"ret {name}", t))
        for name, t in ctx:
            if isinstance(t, Ref):
                content = self.sorts.ctype(t.sort)
                out.append((f"!{name}", content))
                out.extend((f"{name} := {v}", One()) for v in self.values_of(content, ctx)[-1:])
        return out

    def _fresh(self, ctx: Ctx) -> str:
        return f"v{len(ctx)}"

    def letrefs(self, ctx: Ctx) -> list[tuple[str, str, TypeExpr]]:
        """``(name, header, type)`` for each way to allocate one cell: ``letref v : S := init in``."""
        name = self._fresh(ctx)
        out = []
        for sort in self.sorts.sorts:
            for v in self.values_of(self.sorts.ctype(sort), ctx)[:1]:
                out.append((name, f"letref {name} : {sort} := {v} in ", Ref(sort)))
        return out

    # ------------------------------------------------------------ enumeration

    def programs(self, ctx: Ctx, depth: int) -> Iterator[tuple[str, TypeExpr]]:
        """Every program of depth at most ``depth`` (in a fixed order)."""
        if depth < 1:
            return
        yield from self.atoms(ctx)
        if depth < 2:
            return
        for name, header, t in self.letrefs(ctx):
            for body, bt in self.programs(ctx + ((name, t),), depth - 1):
                yield header + body, bt
        name = self._fresh(ctx)
        for m, mt in self.programs(ctx, depth - 1):
            for n, nt in self.programs(ctx + ((name, mt),), depth - 1):
                yield f"let {name} = {m} in {n}", nt

    def sample(self, rng: random.Random, ctx: Ctx, depth: int) -> tuple[str, TypeExpr]:
        """One program of depth at most ``depth``; compound forms are favoured while depth remains."""
        if depth <= 1 or rng.random() < 0.25:
            return rng.choice(self.atoms(ctx))
        if rng.random() < 0.3:
            name, header, t = rng.choice(self.letrefs(ctx))
            body, bt = self.sample(rng, ctx + ((name, t),), depth - 1)
            return header + body, bt
        name = self._fresh(ctx)
        m, mt = self.sample(rng, ctx, depth - 1)
        n, nt = self.sample(rng, ctx + ((name, mt),), depth - 1)
        return f"let {name} = {m} in {n}", nt


def ref_context(world_sorts: Sequence[str]) -> Ctx:
    """``c0 : ref S0, c1 : ref S1, ...`` for the cells of a world."""
    return tuple((f"c{i}", Ref(s)) for i, s in enumerate(world_sorts))
