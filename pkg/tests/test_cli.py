import json
from fractions import Fraction

import pytest

from racforge.cli import load_code, main
from racforge.codes import avg_success, build_worst_code, worst_success
from racforge.core import Codebook
from racforge.quantum import qrac_success


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main([str(a) for a in argv])
        return code, capsys.readouterr().out

    return _run


def test_bounds_examples(run):
    code, out = run("bounds", "--L", 7, "--k", 2, "--format", "csv")
    assert code == 0 and "closed_form_avg_rac_bound,83/112" in out
    code, out = run("bounds", "--L", 7, "--k", 3, "--format", "json")
    rows = {r["label"]: r for r in json.loads(out)["entries"]}
    assert abs(float(rows["conjectured_worst_qrac_bound"]["value"]) - 0.82733) < 5e-6
    code, out = run("bounds", "--L", 1, "--k", 1, "--format", "json")
    assert all(float(Fraction(r["value"])) == 1 for r in json.loads(out)["entries"])


def test_bounds_usage_error(run):
    assert run("bounds", "--L", 3, "--k", 4)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--L", "3"])
    assert exc.value.code == 2


def test_design_examples_and_files(run, tmp_path):
    code, out = run("design", "avg", "--L", 4, "--k", 2, "--strategy", "exhaustive")
    assert code == 0 and "13/16" in out
    res = json.loads((tmp_path / "design_avg_L4_k2.json").read_text())
    assert float(Fraction(res["success_probability"])) == 0.8125
    saved = load_code(str(tmp_path / "code_avg_L4_k2.json"))
    assert avg_success(saved) == Fraction(13, 16)

    code, out = run("design", "worst", "--L", 4, "--k", 3, "--strategy", "exhaustive")
    assert code == 0 and "3/4" in out
    saved = load_code(str(tmp_path / "code_worst_L4_k3.json"))
    assert worst_success(saved) == Fraction(3, 4)

    code, out = run("design", "avg", "--L", 3, "--k", 3, "--no-files", "--format", "json")
    assert Fraction(json.loads(out)["success_probability"]) == 1


def test_design_json_is_deterministic(run):
    outs = [run("design", "worst", "--L", 5, "--k", 3, "--seed", 11, "--starts", 3, "--no-files",
                "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1] and "seconds" not in outs[0]
    out = run("design", "worst", "--L", 5, "--k", 3, "--starts", 2, "--no-files", "--format", "json",
              "--timing")[1]
    assert "seconds" in json.loads(out)


def test_design_budget_exhausted_exit(run):
    code, _ = run("design", "avg", "--L", 5, "--k", 3, "--strategy", "exhaustive", "--node-limit", 0,
                  "--no-files")
    assert code == 3


def test_construct_examples(run, tmp_path):
    code, out = run("construct", "llm1-qrac", "--L", 5)
    assert code == 0 and out.count("0.94721") == 2
    a, w = qrac_success(load_code(str(tmp_path / "llm1-qrac_L5_k4.json")))
    assert a == pytest.approx(0.947213595, abs=1e-9) and w == pytest.approx(a, abs=1e-9)

    code, out = run("construct", "tensor", "--blocks", "2,1:2,1")
    assert code == 0 and "(4, 2)" in out and out.count("0.85355") == 2
    code, out = run("construct", "l1", "--L", 1)
    assert code == 0 and "average success: 1" in out
    code, out = run("construct", "liabotro-rac", "--L", 3, "--k", 2, "--no-files")
    assert code == 0 and "(3, 2)" in out
    assert run("construct", "liabotro-rac", "--L", 3, "--k", 1, "--no-files")[0] == 2


def test_construct_errors(run):
    assert run("construct", "tensor", "--blocks", "4,1")[0] == 2
    assert run("construct", "tensor", "--blocks", "2;1")[0] == 2
    assert run("construct", "llm1-qrac")[0] == 2
    assert run("construct", "liabotro-qrac", "--L", 4, "--k", 1, "--paulis", "X,Q")[0] == 2


def test_eval_round_trips(run, tmp_path):
    path = tmp_path / "parity.json"
    path.write_text(build_worst_code(Codebook.even_parity(4), 3).to_json())
    code, out = run("eval", path, "--format", "json")
    d = json.loads(out)
    assert code == 0 and (d["avg"], d["worst"]) == ("7/8", "3/4")

    run("construct", "llm1-qrac", "--L", 3)
    _, out = run("eval", tmp_path / "llm1-qrac_L3_k2.json", "--format", "json")
    d = json.loads(out)
    assert abs(float(d["avg"]) - 0.90825) < 5e-6 and abs(float(d["worst"]) - 0.90825) < 5e-6


def test_eval_rejects_invalid_files(run, tmp_path):
    d = json.loads(build_worst_code(Codebook.even_parity(4), 3).to_json())
    d["encoder"][0] = ["9/10"] + ["0"] * 7
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    assert run("eval", bad)[0] == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert run("eval", tmp_path / "junk.json")[0] == 2
    (tmp_path / "other.json").write_text('{"type": "nope"}')
    assert run("eval", tmp_path / "other.json")[0] == 2
    assert run("eval", tmp_path / "missing.json")[0] == 2


def test_reproduce_outputs(run, tmp_path):
    code, out = run("reproduce", "--table", 2, "--max-L", 4, "--strict")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("table,L,k,quantity,computed,paper,match,method")
    assert any(l.startswith("2,3,2,") and ",yes," in l for l in lines)
    assert any(l.startswith("2,4,3,") and ",yes," in l for l in lines)
    code, _ = run("reproduce", "--table", 3, "--max-L", 6, "--format", "json", "--output", tmp_path / "t3.json")
    rows = json.loads((tmp_path / "t3.json").read_text())
    assert code == 0 and all(r["match"] in ("yes", "") for r in rows)
    assert run("reproduce", "--table", 1, "--max-L", 0)[0] == 2


def test_jobs_env_default(monkeypatch):
    from racforge.cli import build_parser

    monkeypatch.setenv("RAC_FORGE_JOBS", "3")
    args = build_parser().parse_args(["design", "avg", "--L", "3", "--k", "1"])
    assert args.jobs == 3
