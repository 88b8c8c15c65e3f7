import json
import subprocess
import sys
from pathlib import Path

import pytest

from stackycoh.cli import main, parse_coeff, parse_group
from stackycoh.gcoh import BUDGET_ENV
from stackycoh.groups import GroupError
from stackycoh.zlin import AbelianGroup

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
RECORD_KEYS = {"degree", "value", "kind", "provenance", "resolved", "order", "pieces", "reason",
               "notes"}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_cohom_json_rows(capsys):
    code, out, _ = run(capsys, "cohom", "--input", SAMPLES / "orbicurve_2_3.json",
                       "--max-degree", 5, "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["degree"] for r in rows] == list(range(6))
    assert [r["value"] for r in rows] == ["k*", "Z^1", "0", "Z/6", "0", "Z/6"]
    assert all(set(r) == RECORD_KEYS for r in rows)


def test_json_is_byte_stable(capsys):
    argv = ("cohom", "--input", SAMPLES / "tower_p2.json", "--max-degree", 4, "--format", "json")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert first == json.dumps(json.loads(first), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def test_values_round_trip_through_the_parser(capsys):
    _, out, _ = run(capsys, "cohom", "--input", SAMPLES / "product_gerbe_g1_d2.json",
                    "--max-degree", 5, "--format", "json")
    for row in json.loads(out):
        if row["kind"] == "exact":
            assert str(AbelianGroup.parse(row["value"])) == row["value"]


def test_filtration_rows(capsys):
    _, out, _ = run(capsys, "cohom", "--input", SAMPLES / "tower_p2.json", "--max-degree", 3,
                    "--format", "json")
    rows = json.loads(out)
    assert rows[1]["kind"] == "filtration" and rows[1]["pieces"] == ["Z/2", "Z/2"]
    assert rows[1]["reason"] == "extension_open" and rows[1]["order"] == 4
    assert rows[3]["order"] == 8


def test_cohom_text(capsys):
    code, out, _ = run(capsys, "cohom", "--input", SAMPLES / "twisted_nodal.json",
                       "--max-degree", 4)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["degree", "value"]
    assert lines[4].split()[:2] == ["3", "Z/6"]


def test_picard(capsys):
    code, out, _ = run(capsys, "picard", "--input", SAMPLES / "orbicurve_2_3.json",
                       "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["discrete_part"] == "Z^1" and rec["coarse_quotient"] == "Z/6"
    assert rec["quotient_check"] is True
    code, out, _ = run(capsys, "picard", "--input", SAMPLES / "twisted_nodal.json")
    assert code == 0 and "ext[Pic(C), Z/6]" in out


@pytest.mark.parametrize("group,coeff,degree,want", [
    ("D6", "Z", 2, "Z/2"), ("Z/4", "Z", 2, "Z/4"), ("Z/2xZ/2", "Z/2", 1, "Z/2 + Z/2"),
    ("C6", "k*", 1, "Z/6"), ("Z/3", "Pic0(g=1)", 1, "Z/3 + Z/3"), ("1", "Z", 3, "0"),
])
def test_groupcoh(capsys, group, coeff, degree, want):
    code, out, _ = run(capsys, "groupcoh", "--group", group, "--coeff", coeff, "--degree", degree,
                       "--format", "json")
    assert code == 0 and json.loads(out)["value"] == want


def test_groupcoh_oracle_flag(capsys):
    code, out, _ = run(capsys, "groupcoh", "--group", "D6", "--coeff", "Z", "--degree", 2,
                       "--oracle")
    assert code == 0 and out.startswith("Z/2") and "bar_oracle" in out


def test_kummer(capsys):
    code, out, _ = run(capsys, "kummer", "--input", SAMPLES / "affine_point_5.json", "--n", 5)
    assert code == 0 and out.strip() == "Z/5"
    code, out, _ = run(capsys, "kummer", "--input", SAMPLES / "orbicurve_2_3.json", "--n", 1)
    assert code == 0 and out.strip() == "0"


def test_crosscheck(capsys):
    code, out, _ = run(capsys, "crosscheck", "--input", SAMPLES / "dihedral_D6.json",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "unequal" and rep["exact"] is True
    code, out, _ = run(capsys, "crosscheck", "--input", SAMPLES / "tower_p2.json")
    assert code == 0 and "flagged" in out


def test_invalid_descriptor_lists_every_problem(capsys):
    code, _, err = run(capsys, "cohom", "--input", SAMPLES / "wild.json", "--max-degree", 2)
    assert code == 1
    assert len(err.strip().splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["cohom", "--input", "missing.json", "--max-degree", "2"],
    ["groupcoh", "--group", "Q8", "--coeff", "Z", "--degree", "1"],
    ["groupcoh", "--group", "Z/2", "--coeff", "nonsense", "--degree", "1"],
    ["groupcoh", "--group", "Z/2", "--coeff", "Z", "--degree", "-1"],
])
def test_invalid_input_exit_one(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_wild_kummer_exit_one(capsys, tmp_path):
    raw = json.loads((SAMPLES / "orbicurve_2_3.json").read_text())
    raw["characteristic"] = 5
    path = tmp_path / "d.json"
    path.write_text(json.dumps(raw))
    assert run(capsys, "kummer", "--input", path, "--n", 10)[0] == 1


@pytest.mark.parametrize("argv", [[], ["bogus"], ["cohom"], ["cohom", "--input", "x",
                                                             "--max-degree", "two"],
                                  ["verify", "nothing"], ["cohom", "--format", "xml"]])
def test_usage_errors_exit_64(capsys, argv):
    assert run(capsys, *argv)[0] == 64


def test_budget_exit_two(capsys, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "10")
    code, _, err = run(capsys, "groupcoh", "--group", "D6", "--coeff", "Z", "--degree", 2)
    assert code == 2 and "budget" in err.lower()


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "zlin", "--format", "json")
    checks = json.loads(out)
    assert code == 0 and {c["status"] for c in checks} == {"pass"}
    code, out, _ = run(capsys, "verify", "crosschecks")
    assert code == 0 and "FLAGGED" in out


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "stackycoh.cli", "kummer", "--input",
                           str(SAMPLES / "affine_point_5.json"), "--n", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "Z/5"


def test_parsers():
    assert parse_group("Z/2 x Z/4").order == 8
    assert parse_group("D10").order == 10 and not parse_group("D10").is_abelian
    assert parse_group("C2xC3").is_cyclic
    for bad in ("D5", "Z/0", "S3"):
        with pytest.raises(GroupError):
            parse_group(bad)
    assert parse_coeff("Z^1 + Z/2") == AbelianGroup(1, (2,))
    assert parse_coeff("k*").kind == "units_of_field"
