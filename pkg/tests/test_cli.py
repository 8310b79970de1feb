import json

import pytest

from gccert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_potential_text(capsys):
    code, out, _ = run(capsys, "potential", "--n", "3", "--m", "2")
    assert code == 0
    assert out.startswith(r"\left( \frac{y_{1,2}}{y_{1,1}}")


def test_potential_json_at_t(capsys):
    code, out, _ = run(capsys, "potential", "--n", "6", "--m", "3", "--t", "1/3", "--format", "json")
    assert code == 0
    exps = {t["t_exp"] for t in json.loads(out)["terms"]}
    # 1 - t inside the box, 1 + it on the boundary for i < m
    assert exps == {"2/3", "1/1", "4/3", "5/3"}


def test_slt_default_seed(capsys):
    code, out, _ = run(capsys, "slt", "--n", "7", "--m", "2", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["generic"] and obj["residuals"] == {}


def test_slt_non_generic_seed(capsys):
    code, out, _ = run(capsys, "slt", "--n", "7", "--m", "2", "--seed=-1,1,1,1,1", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    assert obj["generic"] is False and obj["cell"] == [1, 5]


def test_certify_verify_cycle(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "certify", "--n", "5", "--m", "2", "--t", "1/2", "--cap", "2",
                     "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out.startswith("PASS")

    obj = json.loads(path.read_text())
    obj["point"]["1,3"]["terms"][0][2] *= 3
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and out.startswith("FAIL")


def test_certify_fl3(capsys, tmp_path):
    path = tmp_path / "fl3.json"
    code, _, _ = run(capsys, "certify", "--n", "3", "--t", "1/4", "--cap", "3", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text())["n"] == 3


@pytest.mark.parametrize("argv", [
    ["verify", "/nonexistent/cert.json"],
    ["certify", "--n", "7", "--m", "2", "--t", "1/2"],
    ["certify", "--n", "7", "--m", "5", "--t", "1/2", "--cap", "2"],
    ["slt", "--n", "7", "--m", "2", "--seed", "1,2"],
    ["diagram", "--n", "7", "--m", "4"],
    ["diagram", "--n", "7", "--cycle", "diag:2"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_malformed_certificate_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["verify", str(path)]) == 2


def test_rational_argument_syntax(capsys):
    with pytest.raises(SystemExit):
        main(["certify", "--n", "5", "--t", "0.5", "--cap", "2"])


def test_grid(tmp_path, capsys):
    code, out, _ = run(capsys, "grid", "--n", "3", "4", "--t", "1/4", "--cap", "2",
                       "--out", str(tmp_path), "--format", "json")
    assert code == 0
    rows = json.loads(out)["results"]
    assert [(r["n"], r["m"]) for r in rows] == [(3, 2), (4, 2)]
    assert len(list(tmp_path.glob("cert_*.json"))) == 2
