import json

import pytest

from galdesk import cli
from galdesk import scenarios as sc
from galdesk import padics as pa
from galdesk import padic_weights as pw


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_scenario(tmp_path, kind, payload, seed=0, version=1, name="scenario.json"):
    doc = {"version": version, "kind": kind, "seed": seed, "payload": payload}
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_list_contains_required_builtins(capsys):
    code, out = run_cli(capsys, "list")
    assert code == 0
    assert "gl2-f5-ramakrishna" in out
    assert "sec9-example-a2" in out


def test_unknown_builtin_exit_2(capsys):
    code = cli.main(["run", "no-such-scenario"])
    assert code == 2


def test_malformed_file_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["run", str(path)]) == 2
    path.write_text(json.dumps({"version": 99, "kind": "rootdatum", "seed": 0,
                                "payload": {}}))
    assert cli.main(["run", str(path)]) == 2
    path.write_text(json.dumps({"version": 1, "kind": "rootdatum", "payload": {}}))
    assert cli.main(["run", str(path)]) == 2  # missing seed
    path.write_text(json.dumps({"version": 1, "kind": "nope", "seed": 0, "payload": {}}))
    assert cli.main(["run", str(path)]) == 2


def test_rootdatum_scenario(tmp_path, capsys):
    path = write_scenario(tmp_path, "rootdatum", {"type": [["A", 2]], "central_rank": 0})
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["heights"] == [1, 1, 2]
    assert report["minus_w0"] == [1, 0]


def test_rootdatum_bad_family_exit_2(tmp_path, capsys):
    path = write_scenario(tmp_path, "rootdatum", {"type": [["Q", 2]]})
    assert cli.main(["run", str(path)]) == 2


def test_local_scenario(tmp_path, capsys):
    payload = {"root_datum": {"gl": 2}, "p": 5, "torus_values": [2], "q": 3, "twist": 0}
    path = write_scenario(tmp_path, "local", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["cohomology"] == [1, 2, 1]
    assert report["ramakrishna"] is True
    assert report["certified_root"] == [1]


def test_local_scenario_twisted_and_irregular(tmp_path, capsys):
    # Twist by one: the GL2/F5 module's twisted fixed space is the g_{-alpha}
    # line, matching h0 of the (1)-twist being one-dimensional.
    payload = {"root_datum": {"gl": 2}, "p": 5, "torus_values": [2], "q": 3, "twist": 1}
    path = write_scenario(tmp_path, "local", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["cohomology"][0] == 1
    # A non-regular torus element is reported, not crashed on.
    payload = {"root_datum": {"gl": 2}, "p": 5, "torus_values": [1], "q": 3}
    path = write_scenario(tmp_path, "local", payload, name="irregular.json")
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["ramakrishna"] is False
    assert "ramakrishna_note" in report


def test_numerology_scenario_imaginary_quadratic(tmp_path, capsys):
    payload = {
        "root_datum": {"gl": 2},
        "signature": {"kind": "cm", "degree": 2},
        "mode": "nearly-ordinary",
    }
    path = write_scenario(tmp_path, "numerology", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["cm_parameter"] == 1
    assert report["difference"] == 1


def test_selmer_scenario_random(tmp_path, capsys):
    payload = {"p": 5, "local_dims": {"a": 3, "b": 2}, "global_dim": 3}
    path = write_scenario(tmp_path, "selmer", payload, seed=11)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["selmer_dim"] == 3  # no conditions: the whole global space
    assert report["status"] == "pass"


def test_selmer_scenario_explicit_matrices(tmp_path, capsys):
    # H = ambient sum with identity restrictions, H' = 0.
    payload = {
        "p": 5,
        "local_dims": {"a": 2, "b": 1},
        "res": {"a": [[1, 0, 0], [0, 1, 0]], "b": [[0, 0, 1]]},
        "res_dual": {"a": [[], []], "b": [[]]},
        "pairing": {"a": [[1, 0], [0, 1]], "b": [[1]]},
        "conditions": {"a": [[1], [0]], "b": [[1]]},
    }
    path = write_scenario(tmp_path, "selmer", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["selmer_dim"] == 2
    assert report["condition_dims"] == {"a": 1, "b": 1}


def test_weights_scenario_certificate(tmp_path, capsys):
    f_w = pw.TruncatedSeries(5, 1, 8, 6, {(0,): 1, (1,): 1})
    f_wbar = pw.TruncatedSeries(5, 1, 8, 6, {(0,): 1, (1,): 2})
    payload = {
        "p": 5, "d": 1, "f": 1, "minus_w0": [0],
        "entries": [{"place": "w0", "root_index": 0, "gen_index": 0,
                     "f_w": f_w.serialize(), "f_wbar": f_wbar.serialize()}],
    }
    path = write_scenario(tmp_path, "weights", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "sparsity-certificate"
    kinds = {entry[0] for entry in report["certificate"]["per_zeta"].values()}
    assert "degree" in kinds


def test_weights_scenario_parallel(tmp_path, capsys):
    base = pw.TruncatedSeries(5, 2, 8, 6, {(0, 0): 2, (1, 0): 3, (0, 1): 1})
    scaled = base.scale(pa.teichmuller(2, 5, 8))
    payload = {
        "p": 5, "d": 1, "f": 1, "minus_w0": [0],
        "entries": [{"place": "w0", "root_index": 0, "gen_index": 0,
                     "f_w": scaled.serialize(), "f_wbar": base.serialize()}],
    }
    path = write_scenario(tmp_path, "weights", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    assert json.loads(out)["verdict"] == "parallel-weights"


def test_example_scenario(tmp_path, capsys):
    payload = {"root_datum": {"type": [["A", 2]]}, "r": 2, "p": 29}
    path = write_scenario(tmp_path, "example", payload)
    code, out = run_cli(capsys, "run", path)
    assert code == 0
    report = json.loads(out)
    assert report["local_dims"] == [0, 1, 0]
    assert report["sqrt_in_base_field"] is True


def test_example_scenario_invalid_r(tmp_path, capsys):
    payload = {"root_datum": {"type": [["A", 1]]}, "r": 1, "p": 19}
    path = write_scenario(tmp_path, "example", payload)
    assert cli.main(["run", str(path)]) == 2


def test_report_determinism(tmp_path, capsys):
    outputs = []
    for _ in range(2):
        code, out = run_cli(capsys, "run", "weights-dichotomy-corpus", "--seed", "7")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_out_flag_and_table_format(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = cli.main(["run", "rootdatum-profiles", "--out", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["status"] == "pass"
    code, out = run_cli(capsys, "run", "rootdatum-profiles", "--format", "table")
    assert code == 0
    assert "[PASS] profile A2" in out


def test_every_builtin_exits_zero(capsys):
    for entry in sc.list_builtins():
        code, _ = run_cli(capsys, "run", entry["id"], "--seed", "1")
        assert code == 0, entry["id"]
