import json

import pytest

from indexcode.cli import main
from indexcode.instance import gen_random, serialize_instance


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_figure2(capsys):
    code, out, _ = run(capsys, "compute", "--gen", "figure2:1", "--all")
    assert code == 0
    params = json.loads(out)["parameters"]
    assert (params["psi_f"], params["psi_fl"], params["psi_f_p"], params["psi_fl_p"]) == ("6", "4", "4", "4")


def test_compute_complete_all_ones(capsys):
    code, out, _ = run(capsys, "compute", "--gen", "complete:5", "--all")
    assert code == 0 and set(json.loads(out)["parameters"].values()) == {"1"}


def test_compute_rationals_and_relax_filter(capsys):
    code, out, _ = run(capsys, "compute", "--gen", "bidicycle:5", "--relax")
    assert code == 0
    assert json.loads(out)["parameters"] == {"psi_f": "5/2", "psi_fl": "5/2", "psi_f_p": "5/2", "psi_fl_p": "5/2"}
    code, out, _ = run(capsys, "compute", "--gen", "bidicycle:5", "--param", "psi", "--relax")
    assert list(json.loads(out)["parameters"]) == ["psi_f"]


def test_compute_is_deterministic(capsys):
    a = run(capsys, "compute", "--gen", "random:6,4,0.5,3", "--all")[1]
    b = run(capsys, "compute", "--gen", "random:6,4,0.5,3", "--all")[1]
    assert a == b


def test_table_format(capsys):
    code, out, _ = run(capsys, "compute", "--gen", "bidicycle:5", "--param", "psi_f", "--format", "table")
    assert code == 0 and "2.5  5/2" in out


def test_code_examples(capsys, tmp_path):
    out_file = tmp_path / "code.json"
    code, out, _ = run(capsys, "code", "--gen", "figure2:1", "--param", "psi_l", "--field", "7",
                       "--output", str(out_file))
    assert code == 0
    rep = json.loads(out)["codes"]["psi_l"]
    assert rep["rate"] == "4" and rep["decodable"]
    assert len(json.loads(out_file.read_text())["rows"]) == 4
    code, out, _ = run(capsys, "code", "--gen", "dicycle:4", "--param", "psi_f_p")
    assert code == 0 and json.loads(out)["codes"]["psi_f_p"]["rate"] == "3"
    code, out, _ = run(capsys, "code", "--gen", "complete:4", "--param", "psi")
    assert code == 0 and json.loads(out)["codes"]["psi"]["rate"] == "1"


def test_field_too_small_is_input_error(capsys):
    code, _, err = run(capsys, "code", "--gen", "figure2:1", "--param", "psi_l", "--field", "2")
    assert code == 2 and "q >= 6" in err


def test_verify_theorems(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--gen", "figure2:1..3")
    doc = json.loads(out)
    assert code == 0 and doc["instances"] == 3 and doc["violations"] == 0
    code, out, _ = run(capsys, "verify-theorems", "--gen", "random:7,5,0.5,0", "--trials", "50")
    assert code == 0 and json.loads(out)["instances"] == 50
    code, out, _ = run(capsys, "verify-theorems", "--gen", "complete:2..5")
    assert code == 0


def test_minrank_command(capsys):
    code, out, _ = run(capsys, "minrank", "--gen", "bidicycle:5")
    doc = json.loads(out)
    assert code == 0 and doc["parameters"]["minrank"] == "3" and doc["codes"]["minrank"]["decodable"]
    code, _, _ = run(capsys, "minrank", "--gen", "random:5,3,0.5,1")
    assert code == 2


def test_gen_and_input_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--gen", "random:6,4,0.5,3")
    assert code == 0 and out == serialize_instance(gen_random(6, 4, 0.5, 3))
    path = tmp_path / "inst.json"
    path.write_text(out)
    a = json.loads(run(capsys, "compute", "--input", str(path), "--all")[1])
    b = json.loads(run(capsys, "compute", "--gen", "random:6,4,0.5,3", "--all")[1])
    assert a["parameters"] == b["parameters"] and a["instance"]["digest"] == b["instance"]["digest"]
    code, out, _ = run(capsys, "gen", "--gen", "figure2:1..2")
    assert len(json.loads(out)) == 2


@pytest.mark.parametrize("args", [
    ["compute", "--gen", "nope:3"],
    ["compute", "--gen", "figure2"],
    ["compute", "--gen", "random:6,4,abc,1"],
    ["compute", "--gen", "complete:3", "--param", "chi"],
])
def test_input_errors(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_missing_and_malformed_files(capsys, tmp_path):
    assert run(capsys, "compute", "--input", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "compute", "--input", str(bad))[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["compute"])
    assert e.value.code == 2


def test_resource_cap_exit_3(capsys):
    code, _, err = run(capsys, "compute", "--gen", "random:30,10,0.5,1", "--param", "psi_p")
    assert code == 3 and "cap" in err


def test_unrequested_packet_warning(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"packets": ["a", "b"], "users": [{"id": "u", "request": "a", "side_info": []}]}))
    code, _, err = run(capsys, "compute", "--input", str(path), "--param", "psi")
    assert code == 0 and "warning" in err
