import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from groundstore.cli import main
from groundstore.logic.verdict import verdict_schema

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def cli(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def sample(name):
    return SAMPLES / name


# ---------------------------------------------------------------- run


def test_run_unit(capsys):
    code, out, _ = cli(capsys, "run", sample("unit.gsl"))
    assert code == 0 and "()" in out


def test_unused_cell_prints_like_unit(capsys):
    _, a, _ = cli(capsys, "run", sample("unit.gsl"))
    _, b, _ = cli(capsys, "run", sample("unused_cell.gsl"))
    assert a == b
    _, a, _ = cli(capsys, "run", "--format", "json", sample("unit.gsl"))
    _, b, _ = cli(capsys, "run", "--format", "json", sample("unused_cell.gsl"))
    assert a == b and json.loads(a)["heap"] == {}


def test_allocation_order_is_unobservable(capsys):
    _, a, _ = cli(capsys, "run", sample("alloc_ab.gsl"))
    _, b, _ = cli(capsys, "run", sample("alloc_ba.gsl"))
    assert a == b


def test_dllist_prints_cyclic_heap(capsys):
    code, out, _ = cli(capsys, "run", "--format", "json", sample("dllist.gsl"))
    assert code == 0
    data = json.loads(out)
    assert data["public"] == "{}" and data["value"] == "#0"
    assert data["heap"] == {"#0": "(0, inr (), inl #1)", "#1": "(1, inl #0, inr ())"}


def test_freshness_reads_false(capsys):
    code, out, _ = cli(capsys, "run", "--format", "json", sample("freshness.gsl"))
    assert code == 0 and json.loads(out)["value"] == "inr ()"


def test_inline_expression(capsys):
    code, out, _ = cli(capsys, "run", "-e", "letref x := 5 in !x")
    assert code == 0 and "5" in out


# ---------------------------------------------------------------- check / entail


def test_check_verdicts(capsys):
    assert cli(capsys, "check", "--max-world", "1", sample("exists_cell.gsf"))[0] == 0
    assert cli(capsys, "check", "--max-world", "1", sample("true.gsf"))[0] == 0
    code, out, _ = cli(capsys, "check", "--max-world", "1", "--max-extra-cells", "1", sample("no_cell.gsf"))
    assert code == 1 and "FailsWithWitness" in out


def test_check_at_heaplet_example2(capsys):
    args = ["check", sample("example2.gsf"), "--heaplet", "over {#0:RInt, #1:Int} { #1 -> 6 }", "--env", "l = #0",
            "--max-extra-cells", "1"]
    assert cli(capsys, *args)[0] == 1
    assert cli(capsys, *args, "--naive-implication")[0] == 0


def test_sorts_file_and_islist_membership(capsys):
    args = ["check", sample("islist.gsf"), "--int-max", "1", "--max-extra-cells", "1", "--env", "l = #0"]
    assert cli(capsys, *args, "--heaplet", "over {#0:List} { #0 -> inl () }")[0] == 0
    assert cli(capsys, *args, "--heaplet", "over {#0:List, #1:List} { #0 -> inr (1, #1) }")[0] == 1
    code, out, _ = cli(capsys, "run", "--sorts", sample("extra.sorts"), "-e", "ret ()")
    assert code == 0


def test_entail(capsys):
    assert cli(capsys, "entail", "--max-world", "1", sample("refl.gse"))[0] == 0
    code, out, _ = cli(capsys, "entail", "--max-world", "1", "--format", "json", sample("star_dup.gse"))
    assert code == 1
    data = json.loads(out)
    jsonschema.validate(data, verdict_schema())
    assert data["outcome"] == "FailsWithWitness"


def test_json_verdict_matches_schema(capsys):
    for f in ["exists_cell.gsf", "no_cell.gsf", "true.gsf"]:
        _, out, _ = cli(capsys, "check", "--max-world", "1", "--max-extra-cells", "1", "--format", "json", sample(f))
        jsonschema.validate(json.loads(out), verdict_schema())


# ---------------------------------------------------------------- errors


@pytest.mark.parametrize(
    "args, code",
    [
        (["run", "-e", "let x = in"], 2),
        (["run", "-e", "!5"], 2),
        (["run", "/nonexistent.gsl"], 2),
        (["run"], 2),
        (["check", "-e", "true", "--int-min", "3", "--int-max", "1"], 2),
        (["check", "-e", "l |-> 5"], 2),
        (["run", str(SAMPLES / "higher_order.gsl")], 3),
        (["check", "-e", "forall (f: int -> int). true"], 3),
    ],
)
def test_exit_codes(capsys, args, code):
    got, _, err = cli(capsys, *args)
    assert got == code and err


# ---------------------------------------------------------------- laws


def test_laws_commands(capsys):
    assert cli(capsys, "laws", "pcm")[0] == 0
    code, out, _ = cli(capsys, "laws", "program_eqs", "--format", "json")
    assert code == 0 and json.loads(out)["violations"] == 0


def test_laws_bi_no_ucl_reports_unit_violation(capsys):
    code, out, _ = cli(capsys, "laws", "bi", "--no-ucl", "--max-world", "1", "--format", "json")
    data = json.loads(out)
    assert code == 1
    unit = next(law for law in data["laws"] if law["name"].startswith("unit"))
    assert unit["violations"] > 0


# ---------------------------------------------------------------- determinism


def test_output_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "groundstore", "check", "--max-world", "2", "--max-extra-cells", "1", "--format",
           "json", str(sample("no_cell.gsf"))]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 1 and a.stdout == b.stdout and a.stdout
