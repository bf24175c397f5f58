"""Small enumeration helpers shared by the test modules."""

import itertools

from groundstore.values import IntT, SortTable
from groundstore.worlds import World, injections

SMALL = range(0, 2)
INT_ONLY = SortTable.of({"Int": IntT()})


def worlds_upto(n, sorts=("Int", "RInt")):
    for k in range(n + 1):
        for combo in itertools.product(sorts, repeat=k):
            yield World.from_sorts(combo)


def all_injections_upto(n, sorts=("Int", "RInt")):
    ws = list(worlds_upto(n, sorts))
    for a in ws:
        for b in ws:
            yield from injections(a, b)
