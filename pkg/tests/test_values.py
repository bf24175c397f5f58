import pytest

from groundstore.values import (
    BOOL,
    DEFAULT_SORTS,
    UNIT,
    Arrow,
    Ground,
    HigherOrderError,
    Inl,
    Inr,
    IntT,
    One,
    Pair,
    Prod,
    Ref,
    RefVal,
    SortTable,
    Sum,
    TypeError_,
    Zero,
    count_values,
    enum_values,
    parse_sort_table,
    rename_value,
    well_typed,
)
from groundstore.worlds import Injection, World, inj_compose

from helpers import SMALL, all_injections_upto, worlds_upto

TYPES = [
    One(),
    Zero(),
    IntT(),
    Ref("Int"),
    Ref("RInt"),
    BOOL,
    Prod(Ref("Int"), IntT()),
    Sum(One(), Ref("Int")),
    Prod(Sum(One(), Ref("RInt")), Ref("Int")),
]


def test_enum_examples():
    w = World.from_sorts(["Int", "RInt"])
    assert enum_values(One(), w, SMALL) == [UNIT]
    assert enum_values(Ref("Int"), w, SMALL) == [RefVal(0, "Int")]
    assert enum_values(BOOL, w, SMALL) == [Inl(UNIT), Inr(UNIT)]
    assert enum_values(Zero(), w, SMALL) == []
    with pytest.raises(HigherOrderError):
        enum_values(Arrow(One(), One()), w, SMALL)


def _superset(t, w, domain):
    """A generous candidate set for the brute-force cross-check."""
    atoms = [UNIT] + [Ground(n) for n in domain] + [RefVal(l, s) for l in range(4) for s in ("Int", "RInt")]

    def gen(depth):
        if depth == 0:
            return atoms
        smaller = gen(depth - 1)
        return smaller + [Inl(x) for x in smaller] + [Inr(x) for x in smaller] + [
            Pair(a, b) for a in smaller for b in smaller
        ]

    return set(gen(2))


def test_enum_cardinality_and_brute_force():
    for w in worlds_upto(2):
        for t in TYPES:
            vals = enum_values(t, w, SMALL)
            assert len(vals) == len(set(vals)) == count_values(t, w, SMALL)
            assert all(well_typed(v, t, w, SMALL) for v in vals)
            brute = {v for v in _superset(t, w, SMALL) if well_typed(v, t, w, SMALL)}
            assert brute == set(vals), (t, w)


def test_rename_examples():
    w = World.from_sorts(["Int"])
    w2 = World.from_sorts(["Int", "Int"])
    shift = Injection.of(w, w2, {0: 1})
    assert rename_value(shift, RefVal(0, "Int")) == RefVal(1, "Int")
    v = Pair(RefVal(0, "Int"), Inl(Ground(3)))
    assert rename_value(Injection.identity(w), v) == v


def test_rename_functorial_and_injective():
    injs = list(all_injections_upto(2))
    for f in injs:
        for t in TYPES:
            vals = enum_values(t, f.source, SMALL)
            images = [rename_value(f, v) for v in vals]
            assert len(set(images)) == len(images)
            assert all(well_typed(x, t, f.target, SMALL) for x in images)
            assert [rename_value(Injection.identity(f.source), v) for v in vals] == vals
            for g in injs:
                if g.source == f.target:
                    for v in vals:
                        assert rename_value(inj_compose(g, f), v) == rename_value(g, rename_value(f, v))


def test_sort_table_validation_and_text():
    table = parse_sort_table("sort Int = int;\nsort RInt = ref Int; // pointer\n")
    assert table == DEFAULT_SORTS
    dl = parse_sort_table("sort DLList = int * (ref DLList + 1) * (ref DLList + 1);")
    assert dl.ctype("DLList") == Prod(IntT(), Prod(Sum(Ref("DLList"), One()), Sum(Ref("DLList"), One())))
    with pytest.raises(TypeError_):
        SortTable.of({"F": Arrow(One(), One())})
    with pytest.raises(TypeError_):
        SortTable.of({"A": Ref("B")})
    with pytest.raises(TypeError_):
        parse_sort_table("sort A = int; garbage")


def test_type_printing_round_trip():
    from groundstore.frontend.parser import parse_type

    for t in TYPES + [
        Prod(Prod(IntT(), IntT()), IntT()),
        Sum(Sum(One(), One()), One()),
        Arrow(Arrow(One(), One()), One()),
        Arrow(Prod(IntT(), One()), Sum(One(), IntT())),
    ]:
        assert parse_type(str(t)) == t, str(t)
