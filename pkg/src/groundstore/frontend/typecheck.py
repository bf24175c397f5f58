"""Bidirectional-by-unification typechecker for programs and formulas.

Types of injections are inferred with metavariables; remaining unknowns
default to ``1``.  ``letref`` bindings without a sort annotation receive the
unique sort assignment under which the whole ``letref`` typechecks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Iterable

from ..values import Arrow, IntT, One, Prod, Ref, SortTable, Sum, Zero, ref_sorts
from ..worlds import World
from . import ast as A


class TypeCheckError(TypeError):
    def __init__(self, message: str, span: Any = None) -> None:
        where = f" at {span[0]}..{span[1]}" if span else ""
        super().__init__(message + where)
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Meta:
    id: int

    def __str__(self) -> str:
        return f"?{self.id}"


PROP = "prop"


class Checker:
    def __init__(self, sorts: SortTable, world: World | None = None) -> None:
        self.sorts = sorts
        self.world = world
        self.subst: dict[int, Any] = {}
        self.counter = itertools.count()

    # ------------------------------------------------------------ unification

    def fresh(self) -> Meta:
        return Meta(next(self.counter))

    def resolve(self, t: Any) -> Any:
        while isinstance(t, Meta) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def zonk(self, t: Any, default: Any = One()) -> Any:
        t = self.resolve(t)
        if isinstance(t, Meta):
            return default
        if isinstance(t, Prod):
            return Prod(self.zonk(t.left, default), self.zonk(t.right, default))
        if isinstance(t, Sum):
            return Sum(self.zonk(t.left, default), self.zonk(t.right, default))
        if isinstance(t, Arrow):
            return Arrow(self.zonk(t.arg, default), self.zonk(t.res, default))
        if isinstance(t, A.PredType):
            return A.PredType(self.zonk(t.arg, default))
        return t

    def occurs(self, m: Meta, t: Any) -> bool:
        t = self.resolve(t)
        if t == m:
            return True
        if isinstance(t, (Prod, Sum)):
            return self.occurs(m, t.left) or self.occurs(m, t.right)
        if isinstance(t, Arrow):
            return self.occurs(m, t.arg) or self.occurs(m, t.res)
        return False

    def unify(self, a: Any, b: Any, span: Any = None) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, Meta):
            if self.occurs(a, b):
                raise TypeCheckError(f"infinite type {a} = {self.show(b)}", span)
            self.subst[a.id] = b
            return
        if isinstance(b, Meta):
            self.unify(b, a, span)
            return
        if type(a) is type(b):
            if isinstance(a, (Prod, Sum)):
                self.unify(a.left, b.left, span)
                self.unify(a.right, b.right, span)
                return
            if isinstance(a, Arrow):
                self.unify(a.arg, b.arg, span)
                self.unify(a.res, b.res, span)
                return
        raise TypeCheckError(f"type mismatch: {self.show(a)} vs {self.show(b)}", span)

    def show(self, t: Any) -> str:
        return str(self.zonk(t, default=Meta(-1)))

    # ------------------------------------------------------------ types

    def check_type(self, t: Any, span: Any = None, allow_pred: bool = False) -> Any:
        if isinstance(t, A.PredType):
            if not allow_pred:
                raise TypeCheckError("predicate types are only allowed in contexts", span)
            self.check_type(t.arg, span)
            return t
        missing = ref_sorts(t) - set(self.sorts.sorts)
        if missing:
            raise TypeCheckError(f"unknown sort(s) {sorted(missing)}", span)
        return t

    def ctype(self, sort: str, span: Any) -> Any:
        if sort not in self.sorts:
            raise TypeCheckError(f"unknown sort {sort!r}", span)
        return self.sorts.ctype(sort)

    def ref_sort(self, t: Any, span: Any) -> str:
        t = self.resolve(t)
        if isinstance(t, Ref):
            return t.sort
        if isinstance(t, Meta):
            raise TypeCheckError("cannot determine the sort of this reference; add an annotation", span)
        raise TypeCheckError(f"expected a reference, found {self.show(t)}", span)

    # ------------------------------------------------------------ values

    def value(self, ctx: dict[str, Any], v: Any) -> Any:
        if isinstance(v, A.Var):
            if v.name not in ctx:
                raise TypeCheckError(f"unbound variable {v.name!r}", v.span)
            t = ctx[v.name]
            if isinstance(t, A.PredType):
                raise TypeCheckError(f"{v.name!r} is a predicate, not a value", v.span)
            return t
        if isinstance(v, A.UnitLit):
            return One()
        if isinstance(v, A.IntLit):
            return IntT()
        if isinstance(v, A.LocLit):
            if self.world is None or v.loc not in self.world:
                raise TypeCheckError(f"location #{v.loc} is not allocated", v.span)
            return Ref(self.world.sort_of(v.loc))
        if isinstance(v, A.PairV):
            return Prod(self.value(ctx, v.fst), self.value(ctx, v.snd))
        if isinstance(v, A.InlV):
            return Sum(self.value(ctx, v.val), self.fresh())
        if isinstance(v, A.InrV):
            return Sum(self.fresh(), self.value(ctx, v.val))
        if isinstance(v, A.Ascribe):
            t = self.check_type(v.type, v.span)
            self.unify(self.value(ctx, v.val), t, v.span)
            return t
        if isinstance(v, A.Fun):
            t = self.check_type(v.ptype, v.span)
            body_t, _ = self.comp({**ctx, v.param: t}, v.body)
            return Arrow(t, body_t)
        raise TypeCheckError(f"not a value: {v!r}")

    # ------------------------------------------------------------ computations

    def comp(self, ctx: dict[str, Any], c: Any) -> tuple[Any, Any]:
        """Type of ``c`` and its elaboration (``letref`` sorts filled in)."""
        if isinstance(c, A.Ret):
            return self.value(ctx, c.val), replace(c, val=self._elab_values(ctx, c.val))
        if isinstance(c, A.Let):
            t1, bound = self.comp(ctx, c.bound)
            t2, body = self.comp({**ctx, c.name: t1}, c.body)
            return t2, replace(c, bound=bound, body=body)
        if isinstance(c, A.App):
            tf = self.value(ctx, c.fn)
            ta = self.value(ctx, c.arg)
            res = self.fresh()
            self.unify(tf, Arrow(ta, res), c.span)
            return res, replace(c, fn=self._elab_values(ctx, c.fn), arg=self._elab_values(ctx, c.arg))
        if isinstance(c, A.Case):
            l, r = self.fresh(), self.fresh()
            self.unify(self.value(ctx, c.scrut), Sum(l, r), c.span)
            tl, left = self.comp({**ctx, c.left_name: l}, c.left)
            tr, right = self.comp({**ctx, c.right_name: r}, c.right)
            self.unify(tl, tr, c.span)
            return tl, replace(c, scrut=self._elab_values(ctx, c.scrut), left=left, right=right)
        if isinstance(c, A.Match):
            l, r = self.fresh(), self.fresh()
            self.unify(self.value(ctx, c.scrut), Prod(l, r), c.span)
            t, body = self.comp({**ctx, c.fst_name: l, c.snd_name: r}, c.body)
            return t, replace(c, scrut=self._elab_values(ctx, c.scrut), body=body)
        if isinstance(c, A.Init):
            self.unify(self.value(ctx, c.val), Zero(), c.span)
            return self.fresh(), c
        if isinstance(c, A.Deref):
            sort = self.ref_sort(self.value(ctx, c.ref), c.span)
            return self.ctype(sort, c.span), c
        if isinstance(c, A.Assign):
            sort = self.ref_sort(self.value(ctx, c.ref), c.span)
            self.unify(self.value(ctx, c.val), self.ctype(sort, c.span), c.span)
            return One(), replace(c, val=self._elab_values(ctx, c.val))
        if isinstance(c, A.Letref):
            return self.letref(ctx, c)
        raise TypeCheckError(f"not a computation: {c!r}")

    def _elab_values(self, ctx: dict[str, Any], v: Any) -> Any:
        """Elaborate computations nested in function values."""
        if isinstance(v, A.Fun):
            _, body = self.comp({**ctx, v.param: self.check_type(v.ptype, v.span)}, v.body)
            return replace(v, body=body)
        if isinstance(v, A.PairV):
            return replace(v, fst=self._elab_values(ctx, v.fst), snd=self._elab_values(ctx, v.snd))
        if isinstance(v, (A.InlV, A.InrV, A.Ascribe)):
            return replace(v, val=self._elab_values(ctx, v.val))
        return v

    def letref(self, ctx: dict[str, Any], c: A.Letref) -> tuple[Any, Any]:
        names = [b.name for b in c.bindings]
        if len(set(names)) != len(names):
            raise TypeCheckError("letref binds a name twice", c.span)
        for b in c.bindings:
            if b.sort is not None and b.sort not in self.sorts:
                raise TypeCheckError(f"unknown sort {b.sort!r}", b.span)
        choices = [[b.sort] if b.sort is not None else self.sorts.sorts for b in c.bindings]
        successes = []
        first_error: TypeCheckError | None = None
        for assignment in itertools.product(*choices):
            saved = dict(self.subst)
            try:
                result = self._letref_with(ctx, c, assignment)
                successes.append((assignment, result, dict(self.subst)))
            except TypeCheckError as err:
                first_error = first_error or err
            self.subst = saved
        if not successes:
            raise first_error or TypeCheckError("letref does not typecheck", c.span)
        if len(successes) > 1:
            options = ", ".join("(" + ", ".join(a) + ")" for a, _, _ in successes)
            raise TypeCheckError(f"ambiguous letref sorts {options}; add annotations", c.span)
        _, result, subst = successes[0]
        self.subst = subst
        return result

    def _letref_with(self, ctx: dict[str, Any], c: A.Letref, sorts: Iterable[str]) -> tuple[Any, Any]:
        sorts = list(sorts)
        inner = {**ctx, **{b.name: Ref(s) for b, s in zip(c.bindings, sorts)}}
        bindings = []
        for b, s in zip(c.bindings, sorts):
            self.unify(self.value(inner, b.init), self.ctype(s, b.span), b.span)
            bindings.append(replace(b, sort=s, init=self._elab_values(inner, b.init)))
        t, body = self.comp(inner, c.body)
        return t, replace(c, bindings=tuple(bindings), body=body)

    # ------------------------------------------------------------ formulas

    def formula(self, ctx: dict[str, Any], phi: Any) -> Any:
        """``PROP`` or a ``PredType``."""
        if isinstance(phi, (A.Top, A.Bot)):
            return PROP
        if isinstance(phi, (A.And, A.Or, A.Imp, A.Star, A.Wand)):
            self.expect_prop(ctx, phi.left)
            self.expect_prop(ctx, phi.right)
            return PROP
        if isinstance(phi, A.PointsTo):
            sort = self.ref_sort(self.value(ctx, phi.ref), phi.span)
            self.unify(self.value(ctx, phi.val), self.ctype(sort, phi.span), phi.span)
            return PROP
        if isinstance(phi, A.Eq):
            self.unify(self.value(ctx, phi.left), self.value(ctx, phi.right), phi.span)
            return PROP
        if isinstance(phi, (A.Exists, A.Forall)):
            t = self.check_type(phi.type, phi.span)
            self.expect_prop({**ctx, phi.name: t}, phi.body)
            return PROP
        if isinstance(phi, A.PVar):
            t = ctx.get(phi.name)
            if t is None:
                raise TypeCheckError(f"unbound predicate {phi.name!r}", phi.span)
            if not isinstance(t, A.PredType):
                raise TypeCheckError(f"{phi.name!r} is a value, not a predicate", phi.span)
            return t
        if isinstance(phi, A.Abs):
            t = self.check_type(phi.type, phi.span)
            self.expect_prop({**ctx, phi.name: t}, phi.body)
            return A.PredType(t)
        if isinstance(phi, A.PredApp):
            pt = self.formula(ctx, phi.pred)
            if not isinstance(pt, A.PredType):
                raise TypeCheckError("only predicates can be applied", phi.span)
            self.unify(self.value(ctx, phi.arg), pt.arg, phi.span)
            return PROP
        if isinstance(phi, A.Fix):
            t = self.check_type(phi.type, phi.span)
            pt = A.PredType(t)
            self.expect_prop({**ctx, phi.pname: pt, phi.name: t}, phi.body)
            check_positive(phi.pname, phi.body)
            return pt
        raise TypeCheckError(f"not a formula: {phi!r}")

    def expect_prop(self, ctx: dict[str, Any], phi: Any) -> None:
        if self.formula(ctx, phi) != PROP:
            raise TypeCheckError("expected a proposition, found a predicate", getattr(phi, "span", None))


def check_positive(pname: str, phi: Any, positive: bool = True) -> None:
    """Reject occurrences of ``pname`` under an odd number of left-of-arrow positions."""
    if isinstance(phi, A.PVar):
        if phi.name == pname and not positive:
            raise TypeCheckError(f"{pname} occurs negatively in its fixpoint body", phi.span)
        return
    if isinstance(phi, (A.Imp, A.Wand)):
        check_positive(pname, phi.left, not positive)
        check_positive(pname, phi.right, positive)
        return
    if isinstance(phi, (A.And, A.Or, A.Star)):
        check_positive(pname, phi.left, positive)
        check_positive(pname, phi.right, positive)
        return
    if isinstance(phi, (A.Exists, A.Forall, A.Abs)):
        if phi.name != pname:
            check_positive(pname, phi.body, positive)
        return
    if isinstance(phi, A.PredApp):
        check_positive(pname, phi.pred, positive)
        return
    if isinstance(phi, A.Fix):
        if phi.pname != pname and phi.name != pname:
            check_positive(pname, phi.body, positive)
        return


# ---------------------------------------------------------------- entry points


def _ctx(checker: Checker, ctx: Iterable[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name, t in ctx:
        if name in out:
            raise TypeCheckError(f"context binds {name!r} twice")
        out[name] = checker.check_type(t, allow_pred=True)
    return out


def typecheck_program(
    term: Any, sorts: SortTable, ctx: Iterable[tuple[str, Any]] = (), world: World | None = None
) -> tuple[Any, Any]:
    """The type of a computation and its elaboration."""
    checker = Checker(sorts, world)
    t, elaborated = checker.comp(_ctx(checker, ctx), term)
    return checker.zonk(t), elaborated


def typecheck_value(v: Any, sorts: SortTable, ctx: Iterable[tuple[str, Any]] = (), world: World | None = None) -> Any:
    checker = Checker(sorts, world)
    return checker.zonk(checker.value(_ctx(checker, ctx), v))


def check_value(
    v: Any, t: Any, sorts: SortTable, ctx: Iterable[tuple[str, Any]] = (), world: World | None = None
) -> None:
    checker = Checker(sorts, world)
    checker.unify(checker.value(_ctx(checker, ctx), v), t, getattr(v, "span", None))


def typecheck_formula(
    phi: Any, sorts: SortTable, ctx: Iterable[tuple[str, Any]] = (), world: World | None = None
) -> Any:
    checker = Checker(sorts, world)
    result = checker.formula(_ctx(checker, ctx), phi)
    return result if result == PROP else checker.zonk(result)
