from groundstore.heaplets import Heaplet, all_heaplets, transport
from groundstore.initializations import (
    Init,
    fresh_extensions,
    hhat_apply,
    init_compose,
    promote,
    promote_pair,
)
from groundstore.values import DEFAULT_SORTS, Ground
from groundstore.worlds import EMPTY, Injection, World, inj_compose, injections, local_oplus, oplus

from helpers import INT_ONLY, SMALL, worlds_upto


def _extend(w, sorts, fill):
    target, inc, inr = oplus(w, World.from_sorts(sorts))
    return Init(inc, Heaplet.of(target, {inr(k): v for k, v in fill.items()}))


def test_compose_example():
    w0 = World.from_sorts(["Int"])
    e1 = _extend(w0, ["Int"], {0: Ground(5)})
    e2 = _extend(e1.target, ["Int"], {0: Ground(0)})
    e = init_compose(e2, e1)
    assert e.fill == Heaplet.of(e2.target, {1: Ground(5), 2: Ground(0)})
    assert e.is_total
    assert init_compose(Init.identity(e.target), e) == e
    assert init_compose(e, Init.identity(w0)) == e


def test_hhat_example():
    w0 = World.from_sorts(["Int"])
    e = _extend(w0, ["Int"], {0: Ground(6)})
    h = Heaplet.of(w0, {0: Ground(5)})
    assert hhat_apply(e, h) == Heaplet.of(e.target, {0: Ground(5), 1: Ground(6)})
    assert hhat_apply(Init.identity(w0), h) == h


def _inits_from(w, table, max_fresh=1, fills="partial"):
    return list(fresh_extensions(w, table.sorts, max_fresh, table, SMALL, fills=fills))


def test_compose_associative_and_functorial():
    table = DEFAULT_SORTS
    for w in worlds_upto(1):
        for e1 in _inits_from(w, table):
            e2s = _inits_from(e1.target, table)
            for e2 in e2s:
                e21 = init_compose(e2, e1)
                for h in all_heaplets(w, table, SMALL):
                    assert hhat_apply(e21, h) == hhat_apply(e2, hhat_apply(e1, h))
                for e3 in _inits_from(e2.target, INT_ONLY):
                    assert init_compose(e3, e21) == init_compose(init_compose(e3, e2), e1)


def test_totality_preserved():
    table = DEFAULT_SORTS
    for w in worlds_upto(1):
        for e1 in _inits_from(w, table, fills="total"):
            assert e1.is_total
            for e2 in _inits_from(e1.target, table, fills="total"):
                assert init_compose(e2, e1).is_total
            for rho in _inits_from(w, table, fills="none"):
                assert promote(rho.rho, e1).is_total


def test_promote_examples():
    w = World.from_sorts(["Int"])
    e = _extend(w, ["Int"], {0: Ground(1)})
    p = promote(Injection.identity(w), e)
    # equal up to the identification of the coproduct with e's target
    isos = [t for t in injections(e.target, p.target) if inj_compose(t, e.rho) == p.rho]
    assert any(transport(e.fill, t) == p.fill for t in isos if len(p.target) == len(e.target))
    bare = Init.identity(w)
    rho1 = Injection.inclusion(w, World.from_sorts(["Int", "Int"]))
    lifted = promote(rho1, bare)
    assert len(lifted.source) == len(lifted.target) and len(lifted.fill) == 0  # an isomorphism
    # empty world: rho1 allocates one cell, e allocates one filled with 5
    rho1 = Injection.inclusion(EMPTY, World.from_sorts(["Int"]))
    e = _extend(EMPTY, ["Int"], {0: Ground(5)})
    p = promote(rho1, e)
    assert len(p.target) == 2 and p.fill.cells == ((1, Ground(5)),)


def test_promote_square_and_pairs():
    table = DEFAULT_SORTS
    for w in worlds_upto(1):
        exts = _inits_from(w, table)
        for e1 in exts:
            for e2 in exts:
                f1, f2 = promote_pair(e1, e2)
                assert init_compose(f1, e1) == init_compose(f2, e2)
                p = promote(e1.rho, e2)
                _, b12, _ = local_oplus(e1.rho, e2.rho)
                assert p.rho == b12
                assert inj_compose(p.rho, e1.rho) == inj_compose(f2.rho, e2.rho)
