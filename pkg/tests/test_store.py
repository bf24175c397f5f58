import pytest

from groundstore.heaplets import Heaplet, all_heaps
from groundstore.hiding import canonicalize, reveal
from groundstore.store import (
    StoreError,
    futures,
    observably_equal,
    observe,
    op_get,
    op_new,
    op_put,
    t_bind,
    t_map,
    t_strength,
    t_unit,
)
from groundstore.values import DEFAULT_SORTS, UNIT, Ground, IntT, One, Pair, Ref, RefVal
from groundstore.worlds import EMPTY, Injection, World, inj_compose, oplus

from helpers import SMALL, worlds_upto

W1 = World.from_sorts(["Int"])
L0 = RefVal(0, "Int")


def test_unit_examples():
    out = t_unit(UNIT, One(), EMPTY).run_here(Heaplet.empty(EMPTY))
    assert out == reveal(Heaplet.empty(EMPTY), UNIT)
    w2 = World.from_sorts(["Int", "Int"])
    shift = Injection.of(W1, w2, {0: 1})
    heap = Heaplet.of(w2, {0: Ground(0), 1: Ground(1)})
    out = t_unit(L0, Ref("Int"), W1).run(shift, heap)
    assert out.value == RefVal(1, "Int") and out.heap == heap


def test_get_put_examples():
    heap = Heaplet.of(W1, {0: Ground(5)})
    assert op_get(L0, W1, IntT()).run_here(heap).value == Ground(5)
    put = op_put(L0, Ground(5), W1).run_here(Heaplet.of(W1, {0: Ground(3)}))
    assert put.heap == heap and put.value == UNIT
    get_after_put = t_bind(op_put(L0, Ground(4), W1), lambda s, _: op_get(RefVal(s(0), "Int"), s.target, IntT()), IntT())
    assert get_after_put.run_here(heap).value == Ground(4)
    twice = t_bind(
        op_put(L0, Ground(1), W1), lambda s, _: op_put(RefVal(s(0), "Int"), Ground(2), s.target), One()
    )
    assert twice.run_here(heap).heap == Heaplet.of(W1, {0: Ground(2)})
    with pytest.raises(StoreError):
        op_get(RefVal(3, "Int"), W1, IntT())


def test_new_examples():
    m = op_new(["Int"], lambda s, refs: [Ground(5)], EMPTY, Ref("Int"))
    out = m.run_here(Heaplet.empty(EMPTY))
    assert out.public == EMPTY and out.carrier == W1
    assert out.value == L0 and out.heap == Heaplet.of(W1, {0: Ground(5)})
    # discarding the result collects the cell
    discard = t_bind(m, lambda s, _: t_unit(UNIT, One(), s.target), One())
    assert observe(discard, Injection.identity(EMPTY), Heaplet.empty(EMPTY)) == reveal(Heaplet.empty(EMPTY), UNIT)
    # new then read it: returns 5 with one hidden cell
    read = t_bind(m, lambda s, r: op_get(r, s.target, IntT()), IntT())
    res = read.run_here(Heaplet.empty(EMPTY))
    assert res.value == Ground(5) and len(res.hidden_cells) == 1
    assert len(canonicalize(res).hidden_cells) == 0
    # mutually linked cells
    table = DEFAULT_SORTS
    pair = op_new(["RInt", "Int"], lambda s, refs: [refs[1], Ground(1)], EMPTY, None)
    linked = pair.run_here(Heaplet.empty(EMPTY))
    assert linked.heap[0] == RefVal(1, "Int")
    assert table.ctype("RInt") == Ref("Int")


def test_futures_are_total():
    for rho, heap in futures(W1, DEFAULT_SORTS, SMALL, 1):
        assert rho.source == W1 and heap.over == rho.target and heap.is_total


def _samples(w):
    """A few computations at ``w`` (depth <= 2) built directly from the operations."""
    out = [t_unit(UNIT, One(), w)]
    for loc in w:
        if w.sort_of(loc) == "Int":
            r = RefVal(loc, "Int")
            out.append(t_map(op_get(r, w, IntT()), lambda s, x: UNIT, One()))
            out.append(op_put(r, Ground(1), w))
    out.append(t_map(op_new(["Int"], lambda s, refs: [Ground(0)], w, Ref("Int")), lambda s, x: UNIT, One()))
    return out


def _kleislis():
    def incr_first(sigma, _):
        # natural: the cell is chosen at the world the Kleisli map starts from
        w = sigma.target
        ints = sigma.source.locs_of_sort("Int")
        if not ints:
            return t_unit(UNIT, One(), w)
        loc = sigma(ints[0])
        r = RefVal(loc, "Int")
        return t_bind(op_get(r, w, IntT()), lambda s, x: op_put(RefVal(s(loc), "Int"), Ground(1 - x.n), s.target), One())

    def alloc(sigma, _):
        w = sigma.target
        m = op_new(["Int"], lambda s, refs: [Ground(1)], w, Ref("Int"))
        return t_map(m, lambda s, x: UNIT, One())

    return [lambda s, x: t_unit(x, One(), s.target), incr_first, alloc]


def test_monad_laws_on_samples():
    table = DEFAULT_SORTS
    for w in worlds_upto(2, ["Int"]):
        for m in _samples(w):
            # right unit
            assert observably_equal(t_bind(m, lambda s, x: t_unit(x, One(), s.target), One()), m, table, SMALL, 1) is None
            for f in _kleislis():
                # left unit
                lhs = t_bind(t_unit(UNIT, One(), w), f, One())
                assert observably_equal(lhs, f(Injection.identity(w), UNIT), table, SMALL, 1) is None
                for g in _kleislis():
                    left = t_bind(t_bind(m, f, One()), g, One())
                    right = t_bind(m, lambda s, x: t_bind(f(s, x), lambda s2, y: g(inj_compose(s2, s), y), One()), One())
                    assert observably_equal(left, right, table, SMALL, 1) is None


def test_strength():
    m = op_new(["Int"], lambda s, refs: [Ground(5)], W1, Ref("Int"))
    paired = t_strength(L0, Ref("Int"), m)
    out = paired.run_here(Heaplet.of(W1, {0: Ground(0)}))
    assert isinstance(out.value, Pair) and out.value.fst == L0
    unit_paired = t_strength(UNIT, One(), t_unit(Ground(1), IntT(), W1))
    assert observe(unit_paired, Injection.identity(W1), Heaplet.of(W1, {0: Ground(0)})).value == Pair(UNIT, Ground(1))


def test_run_contract():
    m = t_unit(UNIT, One(), W1)
    with pytest.raises(StoreError):
        m.run_here(Heaplet.empty(W1))
    with pytest.raises(StoreError):
        m.run(Injection.identity(EMPTY), Heaplet.empty(EMPTY))


def test_observation_detects_difference():
    table = DEFAULT_SORTS
    a = op_put(L0, Ground(0), W1)
    b = op_put(L0, Ground(1), W1)
    witness = observably_equal(a, b, table, SMALL)
    assert witness is not None


def test_rename_then_run_equals_run_then_rename():
    """Naturality of unit/get: behaviour at rho determined by the identity case."""
    table = DEFAULT_SORTS
    w2, inl, _ = oplus(W1, W1)
    m = op_get(L0, W1, IntT())
    for heap in all_heaps(w2, table, SMALL):
        at_rho = m.run(inl, heap)
        moved = op_get(RefVal(inl(0), "Int"), w2, IntT()).run_here(heap)
        assert at_rho == moved
