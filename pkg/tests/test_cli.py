import json
import pathlib

import pytest

from agemo.cli import main

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out, out.err.decode()


@pytest.mark.parametrize("argv, golden", [
    (["compute", "lambda:q=2", "M:alpha=2", "g-status"], "g_status_M_q.json"),
    (["explore", "lambda:q=2", "M:alpha=0", "--dot"], "explore_M_0.dot"),
    (["explore", "lambda:q=2", "right-ideal:alpha=2", "--horizon", "2"], "explore_m_q.json"),
    (["compute", "lambda:q=2", "M:alpha=1", "ext", "--horizon", "6", "--format", "text"], "ext_M_1.txt"),
    (["compile", "lambda:q=2"], "lambda.table"),
    (["compute", "lambda:q=2", "M:alpha=1/4", "tr-profile", "--horizon", "4"], "tr_profile_M_q-2.json"),
])
def test_golden_outputs(capsysbinary, argv, golden):
    code, out, _ = run(capsysbinary, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_bytes()
    # a second run gives the same bytes
    assert run(capsysbinary, *argv)[1] == out


def test_g_status_text_line(capsysbinary):
    code, out, _ = run(capsysbinary, "compute", "lambda:q=2", "M:alpha=2", "g-status", "--format", "text")
    assert code == 0
    assert out.decode() == "M(q): G1 ✓(20), G2 ✓(20), G3 ✗\n"


def test_single_node_self_loop(capsysbinary):
    _, out, _ = run(capsysbinary, "explore", "lambda:q=2", "M:alpha=0", "--dot")
    dot = out.decode()
    assert dot.count("[label=") == 1 and '"M(0)" -> "M(0)";' in dot


def test_compile_then_validate_round_trip(tmp_path, capsysbinary):
    path = tmp_path / "lambda.table"
    assert main(["compile", "lambda_tilde:q=3", "--out", str(path)]) == 0
    code, out, _ = run(capsysbinary, "validate", str(path))
    assert code == 0 and out.decode().splitlines()[1] == "valid"
    code, out, _ = run(capsysbinary, "compute", str(path), "simple:vertex=1", "summary")
    assert code == 0 and json.loads(out)["dim"] == 1


def test_validate_reports_an_invalid_table(tmp_path, capsysbinary):
    path = tmp_path / "bad.table"
    path.write_text("algebra Bad\nfield Q\nbasis e t\nunit 1 0\nmul e e = 1 0\nmul e t = 0 1\n"
                    "mul t e = 0 1\nmul t t = 1 0\nidempotent 1 0\n")
    code, out, _ = run(capsysbinary, "validate", str(path))
    assert code == 1
    assert "invalid" in out.decode()


def test_validate_quiver_file(tmp_path, capsysbinary):
    path = tmp_path / "kronecker.quiver"
    path.write_text("quiver K\nvertex 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n")
    code, out, _ = run(capsysbinary, "validate", str(path), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 4 and data["valid"]


def test_parse_errors_exit_2_with_position(tmp_path, capsysbinary):
    path = tmp_path / "bad.quiver"
    path.write_text("quiver Q\nvertex 1\narrow x: 1 -> 1\nrelation x*w\n")
    code, _, err = run(capsysbinary, "validate", str(path))
    assert code == 2
    assert "line 4, col 12" in err


@pytest.mark.parametrize("argv", [
    ["compute", "lambda", "bogus:alpha=1", "ext"],
    ["compute", "lambda", "M:alpha=1", "nope"],
    ["compute", "lambda", "M:alpha=x", "ext"],
    ["compute", "lambda", "M:beta=1", "ext"],
    ["compute", "lambda:q=0", "M:alpha=1", "ext"],
    ["compute", "lambda_prime", "M:alpha=1", "ext"],
    ["explore", "lambda", "regular", "--walk-horizon", "2"],
    ["validate", "/nonexistent/file.quiver"],
    ["verify-paper", "--q", "1"],
    ["compute", "nosuchalgebra", "M:alpha=1", "ext"],
])
def test_usage_errors_exit_2(capsysbinary, argv):
    code, out, err = run(capsysbinary, *argv)
    assert code == 2
    assert out == b"" and err.startswith("agemo: error:")


def test_argparse_errors_exit_2(capsysbinary):
    with pytest.raises(SystemExit) as info:
        main(["explore", "lambda", "M:alpha=1", "--walk-horizon", "0"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_dual_and_derived_ops(capsysbinary):
    _, out, _ = run(capsysbinary, "compute", "lambda", "M:alpha=2*", "summary")
    data = json.loads(out)
    assert data["module"] == "m(1)Λ" and data["side"] == "right"
    _, out, _ = run(capsysbinary, "compute", "lambda", "M:alpha=1", "cosyzygy", "--format", "text")
    assert out.decode() == "M(1): cosyzygy: M(q^-1) (left, dim 3)\n"
    _, out, _ = run(capsysbinary, "compute", "lambda", "M:alpha=3", "gp", "--q", "-1", "--format", "text")
    assert out.decode() == "M(3): GP-exact, period 2\n"
    _, out, _ = run(capsysbinary, "compute", "lambda_prime", "Mprime:alpha=inf", "summary", "--format", "text")
    assert out.decode().startswith("M'(inf): dimension vector [2]")


def test_field_flag(capsysbinary):
    code, out, _ = run(capsysbinary, "compute", "lambda", "M:alpha=3", "ext", "--field", "GF(7)",
                       "--horizon", "3")
    assert code == 0 and json.loads(out)["ext"] == [0, 0, 0]


def test_out_flag_writes_the_same_bytes(tmp_path, capsysbinary):
    path = tmp_path / "o.json"
    assert main(["explore", "lambda", "M:alpha=0", "--out", str(path)]) == 0
    _, out, _ = run(capsysbinary, "explore", "lambda", "M:alpha=0")
    assert path.read_bytes() == out


def test_verify_paper_subset_as_json(capsysbinary, monkeypatch):
    import agemo.verify as verify

    real = verify.run_claims
    monkeypatch.setattr(verify, "run_claims", lambda *a, **k: real(*a, only=(1, 3), **k))
    code, out, _ = run(capsysbinary, "verify-paper", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert [c["index"] for c in data["claims"]] == [1, 3]
