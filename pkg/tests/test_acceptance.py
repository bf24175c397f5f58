"""The eleven acceptance criteria, each at its stated bounds and time limit.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line (visible with ``-s``
or in the captured output of ``-v`` runs) and fails when its criterion does.
"""

import contextlib
import time
from pathlib import Path

from groundstore.frontend.ast import PredApp, Var
from groundstore.frontend.parser import parse_formula, parse_program_file
from groundstore.interpreter import merge_sorts, run_closed
from groundstore.logic.bounds import Bounds
from groundstore.logic.entail import check_valid, load_heaplet, recheck
from groundstore.logic.laws import check_laws
from groundstore.logic.semantics import Checker, LEnv
from groundstore.logic.verdict import FAILS, HOLDS
from groundstore.values import DEFAULT_SORTS, RefVal, parse_sort_table
from groundstore.worlds import EMPTY

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
INTS_0_7 = Bounds(max_extra_cells=1, int_min=0, int_max=7, max_world=2)


@contextlib.contextmanager
def criterion(capsys, number, title, limit=None):
    start = time.monotonic()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.monotonic() - start
        if limit is not None and elapsed >= limit:
            detail = f" (took {elapsed:.1f}s, limit {limit}s)"
            raise AssertionError(f"criterion {number} over its time limit{detail}")
        status, detail = "PASS", f" ({elapsed:.1f}s)"
    finally:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {status}: {title}{detail}")


def _suite_ok(name, **opts):
    report = check_laws(name, **opts)
    assert report.ok, report.to_text()
    assert all(law.checked > 0 for law in report.results.values())
    return report


def test_criterion_01_exists_cell_valid(capsys):
    with criterion(capsys, 1, "exists (l: ref Int). l |-> 5 is valid at worlds <=2, ints 0..7, k=1", 30):
        v = check_valid([], parse_formula("exists (l: ref Int). l |-> 5"), DEFAULT_SORTS, INTS_0_7)
        assert v.outcome == HOLDS and v.states == 111


def test_criterion_02_no_cell_refuted(capsys):
    with criterion(capsys, 2, "forall (l: ref Int). not (l |-> 5) refuted with a witness", 30):
        phi = parse_formula("forall (l: ref Int). not (l |-> 5)")
        v = check_valid([], phi, DEFAULT_SORTS, INTS_0_7)
        assert v.outcome == FAILS and v.witness is not None
        assert recheck(phi, v.witness, DEFAULT_SORTS, INTS_0_7)


def test_criterion_03_program_equations(capsys):
    with criterion(capsys, 3, "allocation order, unused cell and freshness equations at worlds <=2", 60):
        report = _suite_ok("program_eqs", max_world=2)
        assert {"allocation order", "unused cell", "freshness"} <= set(report.results)
        source = parse_program_file((SAMPLES / "freshness.gsl").read_text())
        outcome = run_closed(source.body, merge_sorts(DEFAULT_SORTS, source.sorts))
        assert str(outcome.result.value) == "inr ()"


def test_criterion_04_example2(capsys):
    with criterion(capsys, 4, "Example 2: extension clause refutes phi -> psi, naive clause accepts it"):
        heap = load_heaplet("over {#0:RInt, #1:Int} { #1 -> 6 }", DEFAULT_SORTS)
        env = LEnv(heap.over, {"l": RefVal(0, "RInt")})
        phi = parse_formula(
            "(exists (m: ref Int). exists (x: int). l |-> m /\\ m |-> x)"
            " -> (exists (m: ref Int). l |-> m /\\ m |-> 6)"
        )
        assert Checker(DEFAULT_SORTS, Bounds(max_extra_cells=1)).sat(phi, env, heap) is False
        naive = Bounds(max_extra_cells=1, naive_implication=True)
        assert Checker(DEFAULT_SORTS, naive).sat(phi, env, heap) is True


def test_criterion_05_pcm(capsys):
    with criterion(capsys, 5, "pcm suite exhaustive at worlds <=3, ints {0,1}", 60):
        report = _suite_ok("pcm", max_world=3, domain=range(0, 2))
        names = set(report.results)
        assert {"unit", "commutativity", "associativity"} <= names


def test_criterion_06_bi(capsys):
    with criterion(capsys, 6, "BI suite exhaustive over upsets at worlds <=2; --no-ucl breaks the unit law", 300):
        report = _suite_ok("bi", max_world=2, domain=range(0, 2))
        names = " ".join(report.results)
        for law in ["unit", "commutativity", "associativity", "adjunction", "preserve", "natural"]:
            assert law in names
        broken = check_laws("bi", no_ucl=True, max_world=2, domain=range(0, 2))
        unit = [r for name, r in broken.results.items() if name.startswith("unit")]
        assert unit and unit[0].violations > 0


def test_criterion_07_hiding(capsys):
    with criterion(capsys, 7, "hiding diamond and canonicalize == oracle, <=2 hidden cells", 300):
        _suite_ok("hiding", max_world=2)


def test_criterion_08_monad(capsys):
    with criterion(capsys, 8, "three monad laws on programs of depth <=3 at worlds <=2", 300):
        report = _suite_ok("monad", max_world=2)
        assert len(report.results) == 3


def test_criterion_09_monotonicity(capsys):
    with criterion(capsys, 9, "monotonicity and shrinkage at worlds <=2", 60):
        _suite_ok("monotonicity", max_world=2)


LIST_SORTS = parse_sort_table("sort List = 1 + int * ref List;")
IS_LIST = "(mu P(r: ref List). r |-> inl () \\/ exists (x: int). exists (n: ref List). r |-> inr (x, n) * P(n))"


def test_criterion_10_is_list(capsys):
    with criterion(capsys, 10, "isList fixpoint equals its unfolding at worlds <=3; membership facts", 60):
        checker = Checker(LIST_SORTS, Bounds(max_extra_cells=1, int_min=0, int_max=1, max_world=3))
        fix = parse_formula(IS_LIST)
        table = checker.fixpoint(fix, LEnv(EMPTY)).table
        assert checker.unfold(fix, LEnv(EMPTY), table) == dict(table.entries)

        def member(literal):
            heap = load_heaplet(literal, LIST_SORTS)
            return checker.sat(PredApp(fix, Var("l")), LEnv(heap.over, {"l": RefVal(0, "List")}), heap)

        assert member("over {#0:List} { #0 -> inl () }")
        assert member("over {#0:List, #1:List} { #0 -> inr (1, #1), #1 -> inl () }")
        assert not member("over {#0:List, #1:List} { #0 -> inr (1, #1) }")


def test_criterion_11_simple_store_oracle(capsys):
    with criterion(capsys, 11, "single-sort store agrees with the dict-heap oracle, depth <=2, worlds <=2"):
        _suite_ok("simple_store", max_world=2)
