import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from boxworld.cli import main
from boxworld.serialization import dump_system_spec, state_to_json, table_to_json
from boxworld.states import pr_box_state, pr_box_table

from conftest import HYBRID, ONE_GBIT, TRIT_PAIR, TWO_GBITS

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("inputs")
    out = {}
    for name, sys_ in [("gbit", ONE_GBIT), ("two", TWO_GBITS), ("hybrid", HYBRID), ("trit", TRIT_PAIR)]:
        p = d / f"{name}.json"
        p.write_text(dump_system_spec(sys_))
        out[name] = p
    out["pr"] = d / "pr.json"
    out["pr"].write_text(json.dumps(state_to_json(pr_box_state())))
    out["table"] = d / "table.json"
    out["table"].write_text(json.dumps(table_to_json(pr_box_table())))
    out["bad_state"] = d / "bad.json"
    out["bad_state"].write_text(json.dumps(state_to_json(pr_box_state() * 2)))
    out["bad_spec"] = d / "badspec.json"
    out["bad_spec"].write_text('{"sites":[{"outcomes":[1]}]}')
    return out


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = call(capsys, *argv)
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return code, data


def test_spec(capsys, files):
    code, r = report(capsys, "spec", "-s", files["two"])
    assert code == 0 and r["dim"] == 9 and r["extremal_effects"] == 16
    assert r["gram"][0] == [["3/4", "-1/4", "1/4", "1/4"], ["-1/4", "3/4", "1/4", "1/4"],
                            ["1/4", "1/4", "3/4", "-1/4"], ["1/4", "1/4", "-1/4", "3/4"]]


def test_vertices_json_and_csv(capsys, files):
    code, r = report(capsys, "vertices", "-s", files["two"], "--oracle")
    assert code == 0 and r["count"] == 24 and r["pure_product"] == 16
    assert r["oracle"]["status"] == "PASS"
    code, out = call(capsys, "vertices", "-s", files["two"], "-o", "csv")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 24
    assert sum(",pure-product," in r for r in rows) == 16


def test_vertices_dimension_guard(capsys, files):
    code, r = report(capsys, "vertices", "-s", files["two"], "--bound-dim", "4")
    assert code == 2 and r["error"] == "bound"


def test_group(capsys, files):
    code, r = report(capsys, "group", "-s", files["gbit"], "--search", "--oracle")
    assert code == 0 and r["order"] == 8 and r["oracle"]["status"] == "PASS"
    code, r = report(capsys, "group", "-s", files["trit"], "--generate")
    assert code == 0 and r["order"] == 72 and r["provenance"] == "generated"


def test_verify_theorem1(capsys, files):
    code, r = report(capsys, "verify", "theorem1", "-s", files["two"])
    assert code == 0 and r["status"] == "PASS"
    assert r["searched_order"] == r["generated_order"] == 128
    code, r = report(capsys, "verify", "theorem1", "-s", files["hybrid"])
    assert code == 0 and r["status"] == "exception-expected"
    assert r["searched_order"] > r["generated_order"]


def test_verify_theorem2(capsys, files):
    code, r = report(capsys, "verify", "theorem2", "-s", files["hybrid"])
    assert code == 0 and r["status"] == "PASS"
    code, r = report(capsys, "verify", "theorem2", "-s", files["gbit"], "--group", "generate", "--oracle")
    assert code == 0 and r["status"] == "PASS" and r["oracle"]["status"] == "PASS"


def test_chsh(capsys, files):
    code, r = report(capsys, "chsh", "-i", files["pr"])
    assert code == 0 and r["chsh"] == "4" and r["correlators"]["ZZ"] == "-1"
    code, r = report(capsys, "chsh", "-i", files["bad_state"])
    assert code == 1 and r["status"] == "FAIL"
    code, r = report(capsys, "chsh", "-i", files["pr"], "-s", files["hybrid"])
    assert code == 2


def test_check(capsys, files):
    code, r = report(capsys, "check", "-s", files["two"], "-i", files["table"])
    assert code == 0 and r["kind"] == "table" and r["valid"] and not r["pure_product"]
    assert r["state"]["values"] == state_to_json(pr_box_state())["values"]
    code, r = report(capsys, "check", "-s", files["two"], "-i", files["bad_state"])
    assert code == 1 and r["witness"]["reason"] == "normalization"
    code, r = report(capsys, "check", "-s", files["gbit"], "-i", files["pr"])
    assert code == 1


def test_usage_errors(capsys, files, tmp_path):
    code, r = report(capsys, "spec", "-s", files["bad_spec"])
    assert code == 2 and r["field"] == "sites[0].outcomes[0]"
    code, r = report(capsys, "spec")
    assert code == 2 and r["error"] == "usage"
    code, r = report(capsys, "spec", "-s", tmp_path / "missing.json")
    assert code == 2
    code, r = report(capsys, "group", "-s", files["two"], "--bound-effects", "0")
    assert code == 2
    code, _ = call(capsys, "frobnicate")
    assert code == 2


def test_quiet_and_text(capsys, files):
    code, out = call(capsys, "verify", "theorem1", "-s", files["gbit"], "--quiet")
    assert code == 0 and out == ""
    code, out = call(capsys, "spec", "-s", files["gbit"], "-o", "text")
    assert code == 0 and "dim: 3" in out.splitlines()


def _run_subprocess(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run(
        [sys.executable, "-m", "boxworld.cli", *map(str, args)],
        capture_output=True, env=env, check=False,
    )


def test_output_is_byte_identical_across_processes(files):
    args = ["group", "-s", files["hybrid"], "--search"]
    outs = [_run_subprocess(args, seed) for seed in (0, 1, 12345)]
    assert all(o.returncode == 0 for o in outs)
    assert outs[0].stdout == outs[1].stdout == outs[2].stdout
    assert outs[0].stdout
