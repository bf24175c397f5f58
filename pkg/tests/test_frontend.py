import pytest

from groundstore.frontend import ast as A
from groundstore.frontend.parser import (
    ParseError,
    parse_entailment_file,
    parse_env_literal,
    parse_formula,
    parse_formula_file,
    parse_heaplet_literal,
    parse_program,
    parse_program_file,
    parse_value,
)
from groundstore.frontend.printer import print_comp, print_formula, print_value
from groundstore.frontend.typecheck import TypeCheckError, typecheck_formula, typecheck_program
from groundstore.values import BOOL, DEFAULT_SORTS, Arrow, IntT, One, Prod, Ref, SortTable, Sum

DL = SortTable.of(
    {"DLList": Prod(IntT(), Prod(Sum(Ref("DLList"), One()), Sum(Ref("DLList"), One()))), "Int": IntT()}
)
BOOLS = SortTable.of({"Int": IntT(), "RInt": Ref("Int"), "Bool": BOOL})

PROGRAMS = [
    "ret ()",
    "letref x := 5 in ret x",
    "letref l1 := (0, inr (), inl l2), l2 := (1, inl l1, inr ()) in ret l1",
    "let x = ret 1 in ret (x, x)",
    "(fun (x: int) -> ret x) 3",
    "letref r := 0 in let u = r := 4 in !r",
    "case inl () of { inl a -> ret 1 | inr b -> ret 2 }",
    "match (1, 2) with (a, b) -> ret (b, a)",
    "letref x : Int := 5, y : RInt := x in let z = !y in !z",
    "ret fun (f: int -> int) -> let y = f 1 in f y",
    "ret inl inr (1, ())",
]

FORMULAS = [
    "true",
    "exists (l: ref Int). l |-> 5",
    "p * (p -* q)",
    "forall (l: ref Int). not (l |-> 5)",
    "a /\\ b * c \\/ d -> e -* f",
    "(a -> b) -> c",
    "a /\\ (b /\\ c)",
    "(exists (x: int). x = 1) /\\ true",
    "(mu P(l: ref List). l |-> inl () \\/ (exists (t: ref List). exists (x: int). l |-> inr (x, t) * P(t)))(h)",
    "(fun (x: int). x = 1)(2)",
    "(nu P(x: 1). P(x))(())",
    "(a, b) = (c, inl ())",
]


@pytest.mark.parametrize("text", PROGRAMS)
def test_program_round_trip(text):
    term = parse_program(text)
    assert parse_program(print_comp(term)) == term


@pytest.mark.parametrize("text", FORMULAS)
def test_formula_round_trip(text):
    phi = parse_formula(text)
    printed = print_formula(phi)
    assert parse_formula(printed) == phi, printed


def test_parse_shapes():
    assert parse_program("ret ()") == A.Ret(A.UnitLit())
    assert parse_program("letref x := 5 in ret x") == A.Letref(
        (A.Binding("x", None, A.IntLit(5)),), A.Ret(A.Var("x"))
    )
    lr = parse_program(PROGRAMS[2])
    assert isinstance(lr, A.Letref) and len(lr.bindings) == 2
    assert parse_formula("true") == A.Top()
    ex = parse_formula("exists (l: ref Int). l |-> 5")
    assert ex == A.Exists("l", Ref("Int"), A.PointsTo(A.Var("l"), A.IntLit(5)))
    assert parse_formula("p * (p -* q)") == A.Star(A.PVar("p"), A.Wand(A.PVar("p"), A.PVar("q")))
    assert parse_formula("not a") == A.Imp(A.PVar("a"), A.Bot())
    assert parse_formula("a /\\ b * c") == A.Star(A.And(A.PVar("a"), A.PVar("b")), A.PVar("c"))
    assert parse_formula("a -> b -> c") == A.Imp(A.PVar("a"), A.Imp(A.PVar("b"), A.PVar("c")))


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as err:
        parse_program("let x = ret 1\nin ret )")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_program("ret #0")
    with pytest.raises(ParseError):
        parse_formula("exists l. l |-> 5")


def test_literals():
    layout, cells = parse_heaplet_literal("over {#0:Int,#1:Int} { #0 -> 5 }")
    assert layout == [(0, "Int"), (1, "Int")] and cells == [(0, A.IntLit(5))]
    assert parse_env_literal("l = #0, x = 5") == [("l", A.LocLit(0)), ("x", A.IntLit(5))]
    assert parse_value("(#1, inl ())", allow_locs=True) == A.PairV(A.LocLit(1), A.InlV(A.UnitLit()))


def test_files():
    src = parse_program_file("sort Bool = 1 + 1;\nletref b := inl () in ret ()")
    assert src.sorts == (("Bool", BOOL),)
    f = parse_formula_file("context l : ref RInt, P : pred ref Int;\nexists (x: ref Int). l |-> x /\\ P(x)")
    assert f.context == (("l", Ref("RInt")), ("P", A.PredType(Ref("Int"))))
    e = parse_entailment_file("context l : ref Int; l |-> 5 |- l |-> 5 * l |-> 5")
    assert isinstance(e.body, A.Entailment)


# ---------------------------------------------------------------- typing


def tc(text, sorts=DEFAULT_SORTS, ctx=()):
    return typecheck_program(parse_program(text), sorts, ctx)[0]


def test_typing_rules():
    assert tc("ret ()") == One()
    assert tc("!l", ctx=[("l", Ref("Int"))]) == IntT()
    assert tc("letref x := 5 in ret x") == Ref("Int")
    assert tc("(fun (x: int) -> ret x) 3") == IntT()
    assert tc("ret fun (x: int) -> ret (x, x)") == Arrow(IntT(), Prod(IntT(), IntT()))
    assert tc(PROGRAMS[2], DL) == Ref("DLList")
    assert tc("letref x := 5, y := x in ret y") == Ref("RInt")
    elaborated = typecheck_program(parse_program("letref x := 5 in ret x"), DEFAULT_SORTS)[1]
    assert elaborated.bindings[0].sort == "Int"


@pytest.mark.parametrize(
    "text,ctx",
    [
        ("ret y", []),  # var
        ("(fun (x: int) -> ret x) ()", []),  # app argument
        ("ret 1 2", []),  # parse-level rejection is fine too
        ("case 1 of { inl a -> ret a | inr b -> ret b }", []),  # case on non-sum
        ("match () with (a, b) -> ret a", []),  # match on non-pair
        ("init ()", []),  # init on non-empty
        ("l := ()", [("l", Ref("Int"))]),  # put content
        ("!x", [("x", IntT())]),  # get on non-ref
        ("letref x := () in ret x", []),  # no sort fits
        ("case inl () of { inl a -> ret 1 | inr b -> ret () }", []),  # branches disagree
    ],
)
def test_typing_rejections(text, ctx):
    with pytest.raises((TypeCheckError, ParseError)):
        tc(text, ctx=ctx)


def test_letref_ambiguity():
    with pytest.raises(TypeCheckError, match="ambiguous"):
        tc("letref b := inl () in ret ()", SortTable.of({"B1": BOOL, "B2": BOOL}))
    assert tc("letref b : B1 := inl () in ret b", SortTable.of({"B1": BOOL, "B2": BOOL})) == Ref("B1")


def test_formula_typing():
    ctx = [("l", Ref("Int"))]
    assert typecheck_formula(parse_formula("l |-> 5"), DEFAULT_SORTS, ctx) == "prop"
    with pytest.raises(TypeCheckError):
        typecheck_formula(parse_formula("l |-> ()"), DEFAULT_SORTS, ctx)
    with pytest.raises(TypeCheckError):
        typecheck_formula(parse_formula("(mu P(x: int). P(x) -> false)(1)"), DEFAULT_SORTS)
    assert typecheck_formula(parse_formula("(mu P(x: int). (P(x) -> false) -> false)(1)"), DEFAULT_SORTS) == "prop"
    with pytest.raises(TypeCheckError):
        typecheck_formula(parse_formula("Q(1)"), DEFAULT_SORTS)
    pred = typecheck_formula(parse_formula("fun (x: int). x = 1"), DEFAULT_SORTS)
    assert pred == A.PredType(IntT())
    with pytest.raises(TypeCheckError):
        typecheck_formula(parse_formula("exists (l: ref Nope). true"), DEFAULT_SORTS)


def test_value_printing():
    v = parse_value("(1, inl (), inr (2, 3))")
    assert print_value(v) == "(1, inl (), inr (2, 3))"
