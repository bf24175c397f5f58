"""Law suites: exhaustive or seeded-sampled checks of the model's algebraic properties.

Every suite returns a :class:`Report` listing, per law, how many instances
were checked and concrete witnesses for any violation.
"""

from __future__ import annotations

import itertools
import random
from typing import Any, Callable

from ..frontend.parser import parse_formula, parse_program
from ..heaplets import Heaplet, all_heaplets, all_heaps, pcm_leq, pcm_mult, reachable, transport
from ..hiding import Hidden, all_hidden, canonicalize, equiv_oracle, forward, precedes
from ..initializations import fresh_extensions, promote_pair
from ..interpreter import Env, program_denotation
from ..programgen import Ctx, ProgramGen, ref_context
from ..store import observably_equal, observe
from ..values import (
    DEFAULT_SORTS,
    IntT,
    One,
    Ref,
    RefVal,
    SortTable,
    Sum,
    Value,
    all_worlds,
    enum_values,
    locations,
)
from ..worlds import Injection, World, injections
from .. import oracle
from .algebra import bi_suite
from .bounds import Bounds
from .report import Report
from .semantics import Checker, LEnv

SUITES = ("pcm", "bi", "hiding", "monad", "program_eqs", "simple_store", "monotonicity")

SMALL = range(0, 2)
BOOL_SORTS = SortTable.of({"Int": IntT(), "RInt": Ref("Int"), "Bool": Sum(One(), One())})
INT_SORTS = SortTable.of({"Int": IntT()})


def _mult(a: Heaplet | None, b: Heaplet | None) -> Heaplet | None:
    if a is None or b is None:
        return None
    r = pcm_mult(a, b)
    return r if isinstance(r, Heaplet) else None


# ---------------------------------------------------------------- pcm


def pcm_suite(sorts: SortTable = DEFAULT_SORTS, domain: range = SMALL, max_world: int = 3) -> Report:
    """Ordered-pcm axioms on heaplets over each world, and naturality of transport."""
    report = Report("pcm", {"max_world": max_world, "int_domain": f"{domain.start}..{domain.stop - 1}"})
    worlds = list(all_worlds(sorts.sorts, max_world))
    for w in worlds:
        hs = list(all_heaplets(w, sorts, domain))
        empty = Heaplet.empty(w)
        n = len(hs)
        prod = [[_mult(a, b) for b in hs] for a in hs]
        index = {h: i for i, h in enumerate(hs)}
        leq = [[pcm_leq(a, b) for b in hs] for a in hs]
        for i, a in enumerate(hs):
            report.law("unit").check(_mult(a, empty) == a and _mult(empty, a) == a, lambda: f"{a}")
            report.law("order reflexive").check(leq[i][i], lambda: f"{a}")
            for j, b in enumerate(hs):
                report.law("commutativity").check(prod[i][j] == prod[j][i], lambda: f"{a} . {b}")
                report.law("order antisymmetric").check(
                    not (leq[i][j] and leq[j][i]) or i == j, lambda: f"{a} <= {b} <= {a}"
                )
                ab = prod[i][j]
                # compatibility: a <= a.b, and the order is the extension order a <= b iff b = a.c
                report.law("multiplication extends").check(ab is None or leq[i][index[ab]], lambda: f"{a} . {b}")
                extends = any(prod[i][k] == b for k in range(n))
                report.law("order is divisibility").check(leq[i][j] == extends, lambda: f"{a} vs {b}")
        assoc = report.law("associativity")
        trans = report.law("order transitive")
        mono = report.law("multiplication monotone")
        for i in range(n):
            for j in range(n):
                ij = prod[i][j]
                left_row = prod[index[ij]] if ij is not None else [None] * n
                bad = [k for k in range(n) if left_row[k] != _mult(hs[i], prod[j][k])]
                assoc.bulk(n, [lambda a=hs[i], b=hs[j], c=hs[k]: f"({a} . {b}) . {c}" for k in bad])
                if leq[i][j]:
                    bad = [k for k in range(n) if leq[j][k] and not leq[i][k]]
                    trans.bulk(n, [lambda a=hs[i], b=hs[j], c=hs[k]: f"{a} <= {b} <= {c}" for k in bad])
                    # a <= b and b.c defined  =>  a.c defined and a.c <= b.c
                    bad = [
                        k
                        for k in range(n)
                        if prod[j][k] is not None and (prod[i][k] is None or not leq[index[prod[i][k]]][index[prod[j][k]]])
                    ]
                    mono.bulk(n, [lambda a=hs[i], b=hs[j], c=hs[k]: f"{a} <= {b}, c = {c}" for k in bad])
    # transport along injections is a pcm homomorphism
    nat = report.law("transport natural")
    for w in worlds:
        if len(w) == max_world:
            continue
        hs = list(all_heaplets(w, sorts, domain))
        for w2 in worlds:
            for rho in injections(w, w2):
                for a in hs:
                    for b in hs:
                        ab = _mult(a, b)
                        lhs = None if ab is None else transport(ab, rho)
                        rhs = _mult(transport(a, rho), transport(b, rho))
                        nat.check(lhs == rhs, lambda: f"{rho}: {a} . {b}")
    return report


# ---------------------------------------------------------------- hiding


def hiding_suite(
    sorts: SortTable = DEFAULT_SORTS, domain: range = SMALL, max_world: int = 2, max_hidden: int = 2
) -> Report:
    """Diamond property of one-cell forward steps; canonical forms agree with the search oracle."""
    report = Report(
        "hiding",
        {"max_world": max_world, "max_hidden": max_hidden, "int_domain": f"{domain.start}..{domain.stop - 1}"},
    )
    diamond = report.law("diamond")
    for w in all_worlds(sorts.sorts, max_world):
        for h in all_hidden(w, sorts, domain, max_world - len(w)):
            steps = list(fresh_extensions(h.carrier, sorts.sorts, 1, sorts, domain, fills="partial", min_fresh=1))
            for e1 in steps:
                u1 = forward(e1, h)
                for e2 in steps:
                    u2 = forward(e2, h)
                    f1, f2 = promote_pair(e1, e2)
                    top1, top2 = forward(f1, u1), forward(f2, u2)
                    ok = top1 == top2 and precedes(u1, top1) is not None and precedes(u2, top1) is not None
                    diamond.check(ok, lambda: f"{h}: steps {e1} and {e2} reach {top1} and {top2}")
    # ~ is an equivalence, so agreeing with the canonical classes on every
    # (representative, class) pair means agreeing on every pair
    agree = report.law("canonicalize agrees with oracle")
    for w in all_worlds(sorts.sorts, max_world):
        hs = list(all_hidden(w, sorts, domain, max_hidden))
        classes = sorted(set(map(canonicalize, hs)), key=str)
        for h in hs:
            ch = canonicalize(h)
            for c in classes:
                same = ch == c
                there = equiv_oracle(h, c, sorts, domain, max_hidden)
                back = equiv_oracle(c, h, sorts, domain, max_hidden)
                agree.check(
                    there == same and back == same,
                    lambda: f"{h} vs {c}: canonical {'equal' if same else 'different'}, oracle {there}/{back}",
                )
        report.notes.append(f"world {w}: {len(hs)} hidden heaplets in {len(classes)} classes")
    return report


# ---------------------------------------------------------------- programs


def _denote(text: str, sorts: SortTable, ctx: Ctx, env: Env):
    return program_denotation(parse_program(text), sorts, list(ctx), env)


def _ref_env(w: World) -> tuple[Ctx, Env]:
    ctx = ref_context([w.sort_of(loc) for loc in w])
    return ctx, Env(w, {f"c{loc}": RefVal(loc, w.sort_of(loc)) for loc in w})


def _agree(law, lhs: str, rhs: str, sorts: SortTable, ctx: Ctx, env: Env, domain: range, max_extra: int) -> None:
    m1, m2 = _denote(lhs, sorts, ctx, env), _denote(rhs, sorts, ctx, env)
    witness = observably_equal(m1, m2, sorts, domain, max_extra)
    law.check(
        witness is None,
        lambda: f"at {env.world}: {lhs}  vs  {rhs}: from {witness[0]} on {witness[1]}: {witness[2]}  vs  {witness[3]}",
    )


def monad_suite(
    sorts: SortTable = DEFAULT_SORTS,
    domain: range = SMALL,
    max_world: int = 2,
    depth: int = 3,
    samples: int = 100,
    seed: int = 0,
    max_extra: int = 1,
) -> Report:
    """Left unit, right unit and associativity on generated programs (seeded sample per world)."""
    rng = random.Random(seed)
    gen = ProgramGen(sorts)
    report = Report(
        "monad",
        {"max_world": max_world, "depth": depth, "samples": samples, "seed": seed, "max_extra_cells": max_extra},
    )
    for w in all_worlds(sorts.sorts, max_world):
        ctx, env = _ref_env(w)
        for _ in range(samples):
            m, mt = gen.sample(rng, ctx, depth)
            n, _ = gen.sample(rng, ctx + (("x", mt),), depth)
            # left unit: let x = ret v in N  ==  N[v/x], with v a value of M's type
            for v in enum_values(mt, w, domain)[:2]:
                lhs = _denote(f"let x = ret x0 in {n}", sorts, ctx + (("x0", mt),), env.bind(x0=v))
                rhs = _denote(n, sorts, ctx + (("x", mt),), env.bind(x=v))
                witness = observably_equal(lhs, rhs, sorts, domain, max_extra)
                report.law("left unit").check(witness is None, lambda: f"at {w}: x = {v} in {n}: {witness}")
            _agree(report.law("right unit"), f"let x = {m} in ret x", m, sorts, ctx, env, domain, max_extra)
            n2, nt = gen.sample(rng, ctx + (("x", mt),), depth)
            p, _ = gen.sample(rng, ctx + (("y", nt),), depth)
            _agree(
                report.law("associativity"),
                f"let y = (let x = {m} in {n2}) in {p}",
                f"let x = {m} in let y = {n2} in {p}",
                sorts,
                ctx,
                env,
                domain,
                max_extra,
            )
    return report


FRESHNESS = (
    "letref l : Bool := inl () in "
    "let old = !c in let u = c := inr () in let u2 = l := inl () in "
    "let r = !c in let u3 = c := old in ret r"
)


def program_eqs_suite(domain: range = SMALL, max_world: int = 2, max_extra: int = 1) -> Report:
    """Allocation-order swap, unused-cell deletion and freshness, for every instantiation within bounds."""
    sorts = BOOL_SORTS
    report = Report("program_eqs", {"max_world": max_world, "int_domain": f"{domain.start}..{domain.stop - 1}"})
    for w in all_worlds(sorts.sorts, max_world):
        ctx, env = _ref_env(w)
        refs = [name for name, t in ctx if t == Ref("Int")]
        inits = [str(n) for n in domain] + refs
        bodies = ["ret ()", "ret (a, b)", "let x = !a in ret (x, b)", "let x = !b in ret a"]
        bodies += [f"let u = {r} := 1 in ret (a, b)" for r in refs]
        for va in inits:
            for vb in inits:
                # writing an int into a only typechecks when a holds ints
                extra = ["let u = a := 1 in !a"] if va not in refs else []
                for body in bodies + extra:
                    _agree(
                        report.law("allocation order"),
                        f"letref a := {va} in letref b := {vb} in {body}",
                        f"letref b := {vb} in letref a := {va} in {body}",
                        sorts,
                        ctx,
                        env,
                        domain,
                        max_extra,
                    )
            for body in ["ret ()", "ret 0"] + [f"!{r}" for r in refs] + [f"{r} := 1" for r in refs]:
                _agree(report.law("unused cell"), f"letref x := {va} in {body}", body, sorts, ctx, env, domain, max_extra)
        for loc in w.locs_of_sort("Bool"):
            fctx = ctx + (("c", Ref("Bool")),)
            fenv = env.bind(c=RefVal(loc, "Bool"))
            _agree(report.law("freshness"), FRESHNESS, "ret inr ()", sorts, fctx, fenv, domain, max_extra)
    if not report.law("freshness").checked:
        report.notes.append("freshness needs a Bool cell; none within bounds")
    return report


# ---------------------------------------------------------------- simple store


def to_plain(v: Value) -> Any:
    """A denotational value in the oracle's representation."""
    from ..values import Ground, Inl, Inr, Pair, UnitVal

    if isinstance(v, Ground):
        return v.n
    if isinstance(v, UnitVal):
        return ()
    if isinstance(v, Pair):
        return ("pair", to_plain(v.fst), to_plain(v.snd))
    if isinstance(v, Inl):
        return ("inl", to_plain(v.val))
    if isinstance(v, Inr):
        return ("inr", to_plain(v.val))
    if isinstance(v, RefVal):
        return ("ref", v.loc)
    raise TypeError(f"no plain form for {v}")


def plain_normal_form(h: Hidden) -> tuple:
    """A canonical hidden result in the oracle's ``normal_form`` shape."""
    public = [loc for loc in h.public]
    return (
        tuple(to_plain(h.heap[loc]) for loc in public),
        to_plain(h.value),
        tuple((loc, to_plain(h.heap[loc])) for loc in sorted(h.hidden_cells)),
    )


def simple_store_suite(domain: range = SMALL, max_world: int = 2, depth: int = 2) -> Report:
    """One sort of integer cells: the denotation agrees with the dict-heap oracle on every program."""
    sorts = INT_SORTS
    gen = ProgramGen(sorts)
    report = Report(
        "simple_store", {"max_world": max_world, "depth": depth, "int_domain": f"{domain.start}..{domain.stop - 1}"}
    )
    law = report.law("agrees with oracle")
    for w in all_worlds(sorts.sorts, max_world):
        ctx, env = _ref_env(w)
        plain_env = {f"c{loc}": ("ref", loc) for loc in w}
        programs = list(gen.programs(ctx, depth))
        heaps = list(all_heaps(w, sorts, domain))
        for text, _ in programs:
            term = parse_program(text)
            m = program_denotation(term, sorts, list(ctx), env)
            for heap in heaps:
                ours = plain_normal_form(observe(m, Injection.identity(w), heap))
                theirs = oracle.run(term, plain_env, {loc: to_plain(heap[loc]) for loc in w})
                law.check(ours == theirs, lambda: f"at {w} on {heap}: {text}: denotation {ours}, oracle {theirs}")
        report.notes.append(f"world {w}: {len(programs)} programs x {len(heaps)} heaps")
    return report


# ---------------------------------------------------------------- monotonicity / shrinkage

L_INT = (("l", Ref("Int")),)
L_K = (("l", Ref("Int")), ("k", Ref("RInt")))
FORMULAS: tuple[tuple[Ctx, tuple[str, ...]], ...] = (
    (
        (),
        (
            "true",
            "false",
            "exists (m: ref Int). m |-> 1",
            "forall (m: ref Int). (m |-> 0) -> (m |-> 0)",
            "forall (m: ref Int). not (m |-> 1)",
            "exists (m: ref RInt). exists (n: ref Int). m |-> n * n |-> 0",
            "(exists (m: ref Int). m |-> 0) -* (exists (m: ref Int). m |-> 0 * true)",
        ),
    ),
    (
        L_INT,
        (
            "l |-> 0",
            "exists (x: int). l |-> x",
            "l |-> 0 * true",
            "(l |-> 0) -* (l |-> 0 * l |-> 0)",
            "(exists (x: int). l |-> x) -* false",
            "not (l |-> 0)",
            "(l |-> 1) -> (l |-> 0)",
            "forall (x: int). l |-> x",
            "l = l",
            "(l |-> 0) \\/ (l |-> 1)",
            "exists (m: ref Int). m |-> 1 * l |-> 1",
            "(mu P(x: ref Int). x |-> 0)(l)",
        ),
    ),
    (
        L_K,
        (
            "k |-> l",
            "exists (m: ref Int). k |-> m * m |-> 1",
            "(l |-> 1) -> (k |-> l)",
            "(l |-> 0) /\\ (k |-> l)",
            "(k |-> l) -* (k |-> l * l |-> 0)",
        ),
    ),
)


def _env_text(env: LEnv) -> str:
    return ", ".join(f"{k} = {v}" for k, v in env.values.items()) or "(empty)"


def _states(sorts: SortTable, domain: range, max_world: int, max_hidden: int, ctx: Ctx):
    """``(public, env, rho, heap)`` with public worlds of at most ``max_world`` cells."""
    for w in all_worlds(sorts.sorts, max_world):
        choices = [enum_values(t, w, domain) for _, t in ctx]
        for combo in itertools.product(*choices):
            env = LEnv(w, {name: v for (name, _), v in zip(ctx, combo)})
            for e in fresh_extensions(w, sorts.sorts, max_hidden, sorts, domain, fills="none"):
                for heap in all_heaplets(e.target, sorts, domain):
                    yield w, env, e.rho, heap


def _drops(heap: Heaplet, keep: set[int]) -> list[Heaplet]:
    """Every ``heap' <= heap`` that still has all cells of ``keep``."""
    droppable = [loc for loc in heap.table if loc not in keep]
    return [
        heap.without(gone)
        for n in range(1, len(droppable) + 1)
        for gone in itertools.combinations(droppable, n)
    ]


def monotonicity_suite(
    sorts: SortTable = DEFAULT_SORTS,
    bounds: Bounds | None = None,
    max_world: int = 2,
    max_hidden: int = 2,
    formulas: tuple[tuple[Ctx, tuple[str, ...]], ...] = FORMULAS,
) -> Report:
    """Monotonicity (upward closure), Shrinkage and invariance under ~ of satisfaction.

    States range over public worlds of at most ``max_world`` cells with up to
    ``max_hidden`` private cells and every heaplet over the carrier.
    """
    bounds = bounds or Bounds(max_extra_cells=2, int_min=0, int_max=1, max_world=max_world)
    checker = Checker(sorts, bounds)
    domain = bounds.domain
    count = sum(len(texts) for _, texts in formulas)
    report = Report(
        "monotonicity",
        {"max_world": max_world, "max_hidden": max_hidden, "bounds": str(bounds), "formulas": count},
    )
    for ctx, texts in formulas:
        parsed = [(text, parse_formula(text)) for text in texts]
        for w, env, rho, heap in _states(sorts, domain, max_world, max_hidden, ctx):
            moved = env.rename(rho)
            roots = [rho(loc) for loc in w] + [r.loc for v in moved.values.values() for r in locations(v)]
            smaller = _drops(heap, set(reachable(roots, heap)))
            bigger = [h for h in all_heaplets(heap.over, sorts, domain, base=heap) if h != heap]
            garbage = list(fresh_extensions(rho.target, sorts.sorts, 1, sorts, domain, fills="partial", min_fresh=1))
            for text, phi in parsed:
                holds = checker.sat(phi, moved, heap)
                state = lambda: f"{text} at public {w}, env {_env_text(env)}, rho {rho}, {heap}"
                if holds:
                    for h2 in bigger:
                        report.law("monotonicity").check(checker.sat(phi, moved, h2), lambda: f"{state()}; fails at {h2}")
                    for h2 in smaller:
                        report.law("shrinkage").check(checker.sat(phi, moved, h2), lambda: f"{state()}; fails at {h2}")
                for e in garbage:
                    up = forward(e, Hidden(rho, heap))
                    report.law("respects hiding").check(
                        checker.sat_at(phi, env, up.rho, up.heap) == holds, lambda: f"{state()}; differs at {up}"
                    )
    return report


# ---------------------------------------------------------------- dispatch


def check_laws(
    suite: str,
    seed: int = 0,
    no_ucl: bool = False,
    sorts: SortTable | None = None,
    domain: range | None = None,
    max_world: int | None = None,
) -> Report:
    """Run one named suite; ``None`` options keep the suite's own defaults."""
    table = sorts or DEFAULT_SORTS
    opts: dict[str, Any] = {}
    if domain is not None:
        opts["domain"] = domain
    if max_world is not None:
        opts["max_world"] = max_world
    runners: dict[str, Callable[[], Report]] = {
        "pcm": lambda: pcm_suite(table, **opts),
        "bi": lambda: bi_suite(
            table, ucl_only=not no_ucl, seed=seed, domain=opts.get("domain", SMALL), max_public=opts.get("max_world", 2)
        ),
        "hiding": lambda: hiding_suite(table, **opts),
        "monad": lambda: monad_suite(table, seed=seed, **opts),
        "program_eqs": lambda: program_eqs_suite(**opts),
        "simple_store": lambda: simple_store_suite(**opts),
        "monotonicity": lambda: monotonicity_suite(
            table,
            bounds=Bounds(2, opts["domain"].start, opts["domain"].stop - 1, opts.get("max_world", 2))
            if "domain" in opts
            else None,
            max_world=opts.get("max_world", 2),
        ),
    }
    if suite not in runners:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return runners[suite]()
