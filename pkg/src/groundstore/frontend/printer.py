"""Pretty printer producing text that parses back to an equal tree."""

from __future__ import annotations

from typing import Any

from . import ast as A


def print_type(t: Any) -> str:
    return str(t)


# ---------------------------------------------------------------- values


def print_value(v: Any) -> str:
    if isinstance(v, A.Fun):
        return f"fun ({v.param}: {print_type(v.ptype)}) -> {print_comp(v.body)}"
    return _value_prefix(v)


def _value_prefix(v: Any) -> str:
    if isinstance(v, A.InlV):
        return f"inl {_value_prefix(v.val)}"
    if isinstance(v, A.InrV):
        return f"inr {_value_prefix(v.val)}"
    return _value_atom(v)


def _value_atom(v: Any) -> str:
    if isinstance(v, A.Var):
        return v.name
    if isinstance(v, A.IntLit):
        return str(v.value)
    if isinstance(v, A.LocLit):
        return f"#{v.loc}"
    if isinstance(v, A.UnitLit):
        return "()"
    if isinstance(v, A.PairV):
        items = [v.fst]
        rest = v.snd
        while isinstance(rest, A.PairV):
            items.append(rest.fst)
            rest = rest.snd
        items.append(rest)
        return "(" + ", ".join(print_value(x) for x in items) + ")"
    if isinstance(v, A.Ascribe):
        return f"({print_value(v.val)} : {print_type(v.type)})"
    return f"({print_value(v)})"


# ---------------------------------------------------------------- computations


def print_comp(c: Any) -> str:
    if isinstance(c, A.Ret):
        return f"ret {print_value(c.val)}"
    if isinstance(c, A.Let):
        return f"let {c.name} = {print_comp(c.bound)} in {print_comp(c.body)}"
    if isinstance(c, A.App):
        return f"{_value_atom(c.fn)} {_value_atom(c.arg)}"
    if isinstance(c, A.Case):
        return (
            f"case {print_value(c.scrut)} of {{ inl {c.left_name} -> {print_comp(c.left)}"
            f" | inr {c.right_name} -> {print_comp(c.right)} }}"
        )
    if isinstance(c, A.Match):
        return f"match {print_value(c.scrut)} with ({c.fst_name}, {c.snd_name}) -> {print_comp(c.body)}"
    if isinstance(c, A.Init):
        return f"init {print_value(c.val)}"
    if isinstance(c, A.Assign):
        return f"{_value_atom(c.ref)} := {print_value(c.val)}"
    if isinstance(c, A.Deref):
        return f"!{_value_atom(c.ref)}"
    if isinstance(c, A.Letref):
        binds = ", ".join(
            f"{b.name}{'' if b.sort is None else ' : ' + b.sort} := {print_value(b.init)}" for b in c.bindings
        )
        return f"letref {binds} in {print_comp(c.body)}"
    raise TypeError(f"not a computation: {c!r}")


# ---------------------------------------------------------------- formulas

_BINARY = {A.Imp: ("->", 0), A.Wand: ("-*", 0), A.Or: ("\\/", 1), A.And: ("/\\", 2), A.Star: ("*", 2)}
_BINDERS = (A.Exists, A.Forall, A.Abs, A.Fix)


def _level(phi: Any) -> int:
    if type(phi) in _BINARY:
        return _BINARY[type(phi)][1]
    if isinstance(phi, _BINDERS):
        return 0
    return 4


def print_formula(phi: Any, level: int = 0) -> str:
    text = _formula(phi)
    if _level(phi) < level:
        return f"({text})"
    return text


def _formula(phi: Any) -> str:
    if isinstance(phi, A.Top):
        return "true"
    if isinstance(phi, A.Bot):
        return "false"
    if isinstance(phi, A.PVar):
        return phi.name
    if isinstance(phi, A.PointsTo):
        return f"{_value_prefix(phi.ref)} |-> {_value_prefix(phi.val)}"
    if isinstance(phi, A.Eq):
        return f"{_value_prefix(phi.left)} = {_value_prefix(phi.right)}"
    if isinstance(phi, A.PredApp):
        return f"{print_formula(phi.pred, 4)}({print_value(phi.arg)})"
    if type(phi) in _BINARY:
        op, lvl = _BINARY[type(phi)]
        if lvl == 2:  # left associative
            return f"{print_formula(phi.left, 2)} {op} {print_formula(phi.right, 3)}"
        return f"{print_formula(phi.left, lvl + 1)} {op} {print_formula(phi.right, lvl)}"
    if isinstance(phi, (A.Exists, A.Forall, A.Abs)):
        kw = {A.Exists: "exists", A.Forall: "forall", A.Abs: "fun"}[type(phi)]
        return f"{kw} ({phi.name}: {print_type(phi.type)}). {print_formula(phi.body)}"
    if isinstance(phi, A.Fix):
        return f"{phi.kind} {phi.pname}({phi.name}: {print_type(phi.type)}). {print_formula(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


def print_context(ctx: Any) -> str:
    return ", ".join(f"{name} : {print_type(t)}" for name, t in ctx)
