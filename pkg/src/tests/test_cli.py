"""
Test suite to test the command line
"""

import json
from pathlib import Path

import pytest

import src.cli as cli
from src.models import OutputEnvelope
from src.schema import I_SURFACE_CHI
from src.service import Service
from src.tests.utils import *

SCHEMAS = Path(__file__).resolve().parents[2] / "schemas"


@pytest.fixture(autouse=True)
def fresh_service(monkeypatch):
    """
    Point the cli module at a new Service with a small pool
    """
    monkeypatch.setattr(cli, "service", Service(workers=2), raising=True)


def test_hj_expand(capsys):
    code, out, _ = run_cli(capsys, ["hj", "expand", "25", "14"])
    assert code == 0
    assert out.strip() == "[2,5,3]"


def test_hj_expand_bad_q(capsys):
    code, out, err = run_cli(capsys, ["hj", "expand", "4", "0"])
    assert code == 2
    assert out == ""
    assert "Q out of range" in err
    assert len(err.strip().splitlines()) == 1


def test_hj_classify(capsys):
    code, out, _ = run_cli(capsys, ["hj", "classify", "5", "2"])
    assert code == 0
    assert out.strip() == "T-singularity d=1 n=3 a=1"


def test_hj_eval(capsys):
    _, out, _ = run_cli(capsys, ["hj", "eval", "4", "3", "2"])
    assert out.strip() == "18/5"


def test_tstring_generate(capsys):
    _, out, _ = run_cli(capsys, ["tstring", "generate", "--level", "0", "--dmax", "2"])
    assert out.splitlines() == ["[4]", "[3,3]"]
    _, out, _ = run_cli(capsys, ["tstring", "generate", "--level", "2", "--dmax", "1"])
    assert "[2,5,3]" in out.splitlines()
    code, _, _ = run_cli(capsys, ["tstring", "generate", "--level", "3", "--dmax", "1"])
    assert code == 0


def test_tstring_descend(capsys):
    _, out, _ = run_cli(capsys, ["tstring", "descend", "4", "3", "2"])
    assert out.splitlines() == ["[4,3,2]", "[3,3]"]


def test_discrepancy(capsys):
    _, out, _ = run_cli(capsys, ["discrepancy", "4", "3", "2"])
    assert out.splitlines() == ["(2/3, 2/3, 1/3)", "index 3", "K^2 = 1"]


def test_discrepancy_json_rationals(capsys):
    data = run_cli_json(capsys, ["discrepancy", "3", "5", "2"])
    assert data["command"] == "discrepancy"
    assert data["result"]["coefficients"] == [
        {"num": 3, "den": 5},
        {"num": 4, "den": 5},
        {"num": 2, "den": 5},
    ]
    for leaf in rational_leaves(data):
        assert isinstance(leaf["num"], int) and leaf["den"] > 0


def test_plurigenus(capsys):
    _, out, _ = run_cli(capsys, ["plurigenus", "4", "3", "2", "-m", "4"])
    assert out.splitlines()[0] == "P_4 = 9"


def test_plurigenus_chi_defaults_to_the_i_surface():
    args = cli.build_parser().parse_args(["plurigenus", "4", "3", "2", "-m", "4"])
    assert args.chi == I_SURFACE_CHI


def test_hilbert_coefficient(capsys):
    _, out, _ = run_cli(
        capsys, ["hilbert", "--weights", "1,1,2,3,5", "--relations", "3,10", "--coeff", "5"]
    )
    assert out.strip() == "13"


def test_hilbert_compare(capsys):
    _, out, _ = run_cli(
        capsys,
        [
            "hilbert",
            "--weights",
            "1,1,2,5",
            "--relations",
            "10",
            "--upto",
            "5",
            "--compare",
            "1,1,2,3,5:3,10",
            "--plurigenera",
            "3",
            "1",
            "10",
        ],
    )
    lines = out.splitlines()
    assert lines[1] == "1, 2, 4, 6, 9, 13"
    assert "equal: true" in lines
    assert "matches plurigenera: true" in lines


def test_fn_splittings(capsys):
    _, out, _ = run_cli(capsys, ["fn", "splittings", "--n", "2", "--class", "4,2"])
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("m=4 d=9") and lines[0].endswith("(R1)")
    assert lines[1].startswith("m=10 d=21") and lines[1].endswith("(R2)")
    assert lines[2].startswith("m=12 d=25") and lines[2].endswith("(R3)")


def test_fn_values(capsys):
    assert run_cli(capsys, ["fn", "h0", "--n", "6", "--class", "3,0"])[1].strip() == "40"
    assert run_cli(capsys, ["fn", "genus", "--n", "2", "--class", "4,2"])[1].strip() == "15"
    assert run_cli(capsys, ["fn", "dbound", "--n", "2", "--class", "4,2"])[1].strip() == "32"
    assert run_cli(capsys, ["fn", "intersect", "--n", "2", "4,2", "0,1"])[1].strip() == "4"
    assert run_cli(capsys, ["fn", "moduli", "R3"])[1].splitlines() == [
        "4",
        "d=25 expected codimension 25, excess 1",
    ]
    assert run_cli(capsys, ["fn", "moduli", "F6_NODAL_BRANCH"])[1].strip() == "27"
    assert run_cli(capsys, ["fn", "canonical", "--n", "6"])[1].strip() == "-2σ0+4Γ on F_6"


def test_fn_cover_odd_branch(capsys):
    code, _, err = run_cli(capsys, ["fn", "cover", "--n", "2", "--class", "3,1"])
    assert code == 2
    assert err.startswith("error:")


def test_bad_argument_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["fn", "h0", "--n", "2", "--class", "four"])
    assert e.value.code == 2


def test_census_markdown(capsys):
    code, out, _ = run_cli(capsys, ["census", "--format", "md"])
    assert code == 0
    lines = out.splitlines()
    header = lines.index("| Cartier index | T-singularity | Construction | Moduli | Component |")
    rows = lines[header + 2 : header + 5]
    assert rows[0].startswith("| 2 | 1/4d(1,2d-1), d<=32 |")
    assert rows[1].startswith("| 3 | 1/18(1,5) |")
    assert rows[2].startswith("| 5 | 1/25(1,14) |")
    assert lines[header + 5] == ""


def test_census_is_deterministic(capsys):
    first = run_cli(capsys, ["census", "--dmax", "6", "--format", "json"])[1]
    second = run_cli(capsys, ["census", "--dmax", "6", "--format", "json"])[1]
    assert first == second


def test_census_json_to_directory(capsys, tmp_path):
    code, out, _ = run_cli(capsys, ["census", "--dmax", "4", "--out", str(tmp_path)])
    assert code == 0
    assert out
    data = json.loads((tmp_path / "census.json").read_text())
    assert data["command"] == "census"
    assert len(data["result"]["theorem"]) == 3


def test_out_file(capsys, tmp_path):
    target = tmp_path / "expand.txt"
    code, out, _ = run_cli(capsys, ["hj", "expand", "18", "5", "--out", str(target)])
    assert code == 0
    assert out == ""
    assert target.read_text() == "[4,3,2]\n"


def test_out_directory_only_for_census(capsys, tmp_path):
    code, _, err = run_cli(capsys, ["hj", "expand", "18", "5", "--out", str(tmp_path)])
    assert code == 2
    assert "directory" in err


def test_verify(capsys):
    code, out, _ = run_cli(capsys, ["verify", "1/25(1,14)"])
    assert code == 0
    assert out.splitlines()[-1] == "all checks passed"
    assert all(line.startswith("PASS") for line in out.splitlines()[1:-1])


def test_verify_excluded_type(capsys):
    code, _, err = run_cli(capsys, ["verify", "9,2"])
    assert code == 2
    assert "excluded" in err


def test_verify_type_beyond_the_census_range(capsys):
    code, _, err = run_cli(capsys, ["verify", "1/400000(1,199999)"])
    assert code == 2
    assert "outside the census range" in err


def test_json_matches_shipped_schema(capsys):
    """
    Tests the envelope keys against the schema files
    """
    envelope_schema = json.loads((SCHEMAS / "output_envelope.schema.json").read_text())
    rational_schema = json.loads((SCHEMAS / "rational.schema.json").read_text())
    assert set(envelope_schema["required"]) == set(OutputEnvelope.model_fields)
    assert set(rational_schema["required"]) == {"num", "den"}

    data = run_cli_json(capsys, ["plurigenus", "2", "5", "3", "-m", "3"])
    assert set(data) == set(envelope_schema["properties"])
    assert isinstance(data["citations"], list)
    leaves = list(rational_leaves(data))
    assert len(leaves) == 3
    assert all(set(leaf) == set(rational_schema["properties"]) for leaf in leaves)


def test_schema_command(capsys):
    code, out, _ = run_cli(capsys, ["schema"])
    assert code == 0
    assert set(json.loads(out)["required"]) == {"command", "inputs", "result", "citations"}


def test_requirements_are_imported():
    """
    Tests every runtime requirement is imported somewhere under src/
    """
    root = SCHEMAS.parent
    tooling = {"pytest", "black"}
    names = [
        line.split(">")[0].split("=")[0].strip()
        for line in (root / "requirements.txt").read_text().splitlines()
        if line.strip()
    ]
    sources = "\n".join(p.read_text() for p in (root / "src").glob("*.py"))
    for name in names:
        if name in tooling:
            continue
        module = name.replace("-", "_")
        assert f"import {module}" in sources or f"from {module}" in sources, name
