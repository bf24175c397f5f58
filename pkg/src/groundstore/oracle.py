"""An independent reference semantics: direct-style evaluation on a mutable dict heap.

This is the textbook "state with allocation" model: locations are naturals,
``letref`` allocates at ``max(dom) + 1`` and the heap is a plain dict.  It
shares nothing with the denotational interpreter except the syntax tree, and
is used to cross-check it on first-order programs.  Values are plain Python
data: ints, ``()``, ``("pair", a, b)``, ``("inl", a)``, ``("inr", a)``,
``("ref", loc)`` and closures ``("fun", param, body, env)``.
"""

from __future__ import annotations

from typing import Any

from .frontend import ast as A

OValue = Any


class OracleError(RuntimeError):
    pass


def _value(v: Any, env: dict[str, OValue]) -> OValue:
    if isinstance(v, A.Var):
        return env[v.name]
    if isinstance(v, A.IntLit):
        return v.value
    if isinstance(v, A.UnitLit):
        return ()
    if isinstance(v, A.PairV):
        return ("pair", _value(v.fst, env), _value(v.snd, env))
    if isinstance(v, A.InlV):
        return ("inl", _value(v.val, env))
    if isinstance(v, A.InrV):
        return ("inr", _value(v.val, env))
    if isinstance(v, A.Ascribe):
        return _value(v.val, env)
    if isinstance(v, A.Fun):
        return ("fun", v.param, v.body, dict(env))
    if isinstance(v, A.LocLit):
        return ("ref", v.loc)
    raise OracleError(f"unsupported value {v!r}")


def _loc(v: OValue) -> int:
    if not (isinstance(v, tuple) and v[:1] == ("ref",)):
        raise OracleError(f"{v!r} is not a reference")
    return v[1]


def evaluate(c: Any, env: dict[str, OValue], heap: dict[int, OValue]) -> OValue:
    """Run computation ``c``, mutating ``heap``; returns the result value."""
    if isinstance(c, A.Ret):
        return _value(c.val, env)
    if isinstance(c, A.Let):
        x = evaluate(c.bound, env, heap)
        return evaluate(c.body, {**env, c.name: x}, heap)
    if isinstance(c, A.Deref):
        return heap[_loc(_value(c.ref, env))]
    if isinstance(c, A.Assign):
        loc = _loc(_value(c.ref, env))
        if loc not in heap:
            raise OracleError(f"dangling reference {loc}")
        heap[loc] = _value(c.val, env)
        return ()
    if isinstance(c, A.Letref):
        inner = dict(env)
        start = max(heap, default=-1) + 1
        for i, b in enumerate(c.bindings):
            inner[b.name] = ("ref", start + i)
        for i, b in enumerate(c.bindings):
            heap[start + i] = _value(b.init, inner)
        return evaluate(c.body, inner, heap)
    if isinstance(c, A.App):
        f = _value(c.fn, env)
        if not (isinstance(f, tuple) and f[:1] == ("fun",)):
            raise OracleError("applying a non-function")
        _, param, body, closure = f
        return evaluate(body, {**closure, param: _value(c.arg, env)}, heap)
    if isinstance(c, A.Case):
        tag, payload = _value(c.scrut, env)
        if tag == "inl":
            return evaluate(c.left, {**env, c.left_name: payload}, heap)
        return evaluate(c.right, {**env, c.right_name: payload}, heap)
    if isinstance(c, A.Match):
        _, a, b = _value(c.scrut, env)
        return evaluate(c.body, {**env, c.fst_name: a, c.snd_name: b}, heap)
    raise OracleError(f"unsupported computation {c!r}")


def _refs(v: OValue) -> list[int]:
    if isinstance(v, tuple) and v:
        if v[0] == "ref":
            return [v[1]]
        if v[0] == "pair":
            return _refs(v[1]) + _refs(v[2])
        if v[0] in ("inl", "inr"):
            return _refs(v[1])
    return []


def _rename(v: OValue, names: dict[int, int]) -> OValue:
    if isinstance(v, tuple) and v:
        if v[0] == "ref":
            return ("ref", names[v[1]])
        if v[0] == "pair":
            return ("pair", _rename(v[1], names), _rename(v[2], names))
        if v[0] in ("inl", "inr"):
            return (v[0], _rename(v[1], names))
    return v


def normal_form(public: int, heap: dict[int, OValue], result: OValue) -> tuple:
    """What an observer can see after a run started on cells ``0..public-1``.

    Returns ``(public contents, result, private contents)`` where the private
    cells are those reachable from the public cells or the result, renamed
    ``public, public+1, ...`` in breadth-first discovery order; every other
    allocated cell is unobservable and dropped.
    """
    order: list[int] = []
    seen: set[int] = set()
    queue = list(range(public)) + _refs(result)
    while queue:
        loc = queue.pop(0)
        if loc in seen:
            continue
        seen.add(loc)
        if loc >= public:
            order.append(loc)
        if loc in heap:
            queue.extend(_refs(heap[loc]))
    names = {loc: loc for loc in range(public)}
    names.update({loc: public + i for i, loc in enumerate(order)})
    return (
        tuple(_rename(heap[loc], names) for loc in range(public)),
        _rename(result, names),
        tuple((names[loc], _rename(heap[loc], names)) for loc in order),
    )


def run(term: Any, env: dict[str, OValue], heap: dict[int, OValue]) -> tuple:
    """Evaluate on a copy of ``heap`` (cells ``0..n-1``) and return the normal form."""
    heap = dict(heap)
    public = len(heap)
    result = evaluate(term, env, heap)
    return normal_form(public, heap, result)
