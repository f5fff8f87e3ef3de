import json

import pytest

from quiverbranes.catalog import NAMES
from quiverbranes.cli import main
from quiverbranes.serialization import dumps, encode_representation, encode_spec
from quiverbranes.catalog import build_bd_example

from corpus import x0


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", NAMES)
def test_catalog_bundle_round_trip(tmp_path, capsys, name):
    path = tmp_path / "bundle.json"
    code, _ = run(capsys, "catalog", "--name", name, "--out", str(path))
    assert code == 0
    code, report = run(capsys, "check", "--input", str(path))
    assert code == 0 and report["ok"] and all(report["expected_checks"].values())


def test_stability_command(tmp_path, capsys):
    path = tmp_path / "x0.json"
    path.write_text(dumps(encode_representation(x0())))
    code, report = run(capsys, "stability", "--input", str(path))
    assert code == 0 and report["stable"] and not report["costable"]


def test_classify(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text(dumps(encode_spec(build_bd_example(1).spec)))
    code, report = run(capsys, "involution", "--action", "classify", "--spec", str(path))
    assert code == 0 and report["brane_type"] == "(B,A,A)"


def test_monad_point(tmp_path, capsys):
    path = tmp_path / "x0.json"
    path.write_text(dumps(encode_representation(x0())))
    code, report = run(capsys, "monad", "--input", str(path), "--point", "1,0:0,0:0,0")
    assert code == 0 and report["fiber_dim"] == 2


def test_tangent_command(tmp_path, capsys):
    path = tmp_path / "c.json"
    main(["catalog", "--name", "c-example", "--out", str(path)])
    capsys.readouterr()
    code, report = run(capsys, "tangent", "--input", str(path))
    assert code == 0 and report["quotient_real_dim"] == 16 and report["fixed_real_dim"] == 8


def test_flow_writes_output(tmp_path, capsys):
    src, dst = tmp_path / "c.json", tmp_path / "flowed.json"
    main(["catalog", "--name", "c-example", "--out", str(src)])
    capsys.readouterr()
    code, report = run(capsys, "flow", "--input", str(src), "--out", str(dst))
    assert code == 0 and report["converged"] and dst.exists()


@pytest.mark.parametrize("content", ["not json", '{"quiver": 3}', "[]"])
def test_garbage_input_is_usage_error(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, report = run(capsys, "check", "--input", str(path))
    assert code == 2 and "error" in report


def test_missing_input_is_usage_error(capsys):
    code, _ = run(capsys, "stability")
    assert code == 2


def test_output_is_deterministic(capsys):
    _, first = run(capsys, "catalog", "--name", "orthogonal", "--seed", "4")
    _, second = run(capsys, "catalog", "--name", "orthogonal", "--seed", "4")
    assert first == second
