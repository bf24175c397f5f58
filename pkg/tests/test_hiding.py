import random

from groundstore.heaplets import Heaplet
from groundstore.hiding import (
    Hidden,
    all_hidden,
    canonicalize,
    equiv_oracle,
    forward,
    hide,
    is_canonical,
    pcov_apply,
    precedes,
    reveal,
)
from groundstore.initializations import Init, fresh_extensions, init_compose
from groundstore.values import DEFAULT_SORTS, Ground, RefVal
from groundstore.worlds import EMPTY, Injection, World, inj_compose, injections, oplus

from helpers import SMALL, worlds_upto

PUB_INT = World.from_sorts(["Int"])
PUB_REF = World.from_sorts(["RInt"])


def _hidden(public, extra_sorts, cells, value=None):
    carrier, inc, _ = oplus(public, World.from_sorts(extra_sorts))
    return Hidden(inc, Heaplet.of(carrier, cells), value)


def test_unreachable_cells_are_dropped():
    h = _hidden(PUB_INT, ["RInt", "Int"], {0: Ground(5), 2: Ground(6)})
    c = canonicalize(h)
    assert c.carrier == PUB_INT and c.heap == Heaplet.of(PUB_INT, {0: Ground(5)})
    assert canonicalize(c) == c


def test_reachable_private_contents_distinguish():
    h5 = _hidden(PUB_REF, ["Int"], {0: RefVal(1, "Int"), 1: Ground(5)})
    h3 = _hidden(PUB_REF, ["Int"], {0: RefVal(1, "Int"), 1: Ground(3)})
    assert canonicalize(h5) != canonicalize(h3)
    assert not equiv_oracle(h5, h3, DEFAULT_SORTS, range(0, 8), 2)
    padded = _hidden(PUB_REF, ["Int", "Int"], {0: RefVal(2, "Int"), 2: Ground(5), 1: Ground(6)})
    assert canonicalize(padded) == canonicalize(h5)
    assert equiv_oracle(h5, padded, DEFAULT_SORTS, range(0, 8), 2)
    assert equiv_oracle(padded, h5, DEFAULT_SORTS, range(0, 8), 2)


def test_picture_pair_left_is_equivalent():
    small = reveal(Heaplet.of(PUB_INT, {0: Ground(5)}))
    big = _hidden(PUB_INT, ["RInt", "Int"], {0: Ground(5), 2: Ground(6)})
    assert equiv_oracle(small, big, DEFAULT_SORTS, range(0, 8), 2)
    assert equiv_oracle(big, small, DEFAULT_SORTS, range(0, 8), 2)


def test_hidden_cycles_are_deleted_and_reachable_unfilled_kept():
    table = DEFAULT_SORTS
    cyc = _hidden(EMPTY, ["RInt", "RInt"], {})
    assert canonicalize(cyc).carrier == EMPTY
    # a public ref pointing at an unfilled private cell keeps it
    h = _hidden(PUB_REF, ["Int"], {0: RefVal(1, "Int")})
    c = canonicalize(h)
    assert len(c.carrier) == 2 and 1 not in c.heap
    assert equiv_oracle(h, c, table, SMALL, 2)


def test_hide_examples_and_composition():
    h = reveal(Heaplet.of(PUB_INT, {0: Ground(5)}))
    assert hide(Injection.identity(PUB_INT), h) == h
    hidden = hide(Injection.inclusion(EMPTY, PUB_INT), h)
    assert hidden.public == EMPTY and hidden.carrier == PUB_INT
    assert canonicalize(hidden).carrier == EMPTY
    w2 = World.from_sorts(["Int", "Int"])
    h2 = reveal(Heaplet.of(w2, {0: Ground(1), 1: Ground(0)}))
    for rho in injections(PUB_INT, w2):
        for sigma in injections(EMPTY, PUB_INT):
            assert hide(sigma, hide(rho, h2)) == hide(inj_compose(rho, sigma), h2)


def test_pcov_example():
    e_carrier, inc, _ = oplus(PUB_INT, World.from_sorts(["Int"]))
    e = Init(inc, Heaplet.of(e_carrier, {1: Ground(6)}))
    h = reveal(Heaplet.of(PUB_INT, {0: Ground(5)}))
    out = canonicalize(pcov_apply(e, h))
    assert out.public == e_carrier and out.carrier == e_carrier
    assert out.heap == Heaplet.of(e_carrier, {0: Ground(5), 1: Ground(6)})
    assert pcov_apply(Init.identity(PUB_INT), h).heap.cells == h.heap.cells


def test_pcov_functorial_and_respects_equivalence():
    table = DEFAULT_SORTS
    rng = random.Random(3)
    hs = list(all_hidden(PUB_REF, table, SMALL, 1))
    for h in rng.sample(hs, min(40, len(hs))):
        for e1 in fresh_extensions(h.public, table.sorts, 1, table, SMALL):
            for e2 in list(fresh_extensions(e1.target, ["Int"], 1, table, SMALL))[:3]:
                lhs = canonicalize(pcov_apply(init_compose(e2, e1), h))
                rhs = canonicalize(pcov_apply(e2, pcov_apply(e1, h)))
                assert lhs == rhs
            # replacing h by an equivalent representative does not change the result
            c = canonicalize(h)
            assert canonicalize(pcov_apply(e1, c)) == canonicalize(pcov_apply(e1, h))


def test_hide_respects_equivalence():
    table = DEFAULT_SORTS
    w = World.from_sorts(["Int", "RInt"])
    for h in all_hidden(w, table, SMALL, 1):
        c = canonicalize(h)
        for sigma in injections(PUB_INT, w):
            assert canonicalize(hide(sigma, h)) == canonicalize(hide(sigma, c))


def test_forward_steps_are_equivalent():
    table = DEFAULT_SORTS
    for h in all_hidden(PUB_REF, table, SMALL, 1):
        for e in fresh_extensions(h.carrier, table.sorts, 1, table, SMALL):
            u = forward(e, h)
            assert precedes(h, u) is not None
            assert canonicalize(u) == canonicalize(h)


def test_canonical_is_idempotent_and_keeps_public():
    table = DEFAULT_SORTS
    for w in worlds_upto(1):
        for h in all_hidden(w, table, SMALL, 2):
            c = canonicalize(h)
            assert is_canonical(c)
            assert c.public == h.public
            for loc in h.public:
                assert (loc in c.heap) == (h.rho(loc) in h.heap)


def test_values_are_roots():
    h = _hidden(EMPTY, ["Int"], {0: Ground(1)}, value=RefVal(0, "Int"))
    c = canonicalize(h)
    assert c.carrier == World.from_sorts(["Int"]) and c.value == RefVal(0, "Int")
    assert canonicalize(Hidden(h.rho, h.heap, Ground(0))).carrier == EMPTY
