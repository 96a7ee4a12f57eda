import json
import subprocess
import sys

import pytest

from buchi import formulas
from buchi.cli import CSV_HEADER, OutputRecord, main, records_from_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_length_paper_example(capsys):
    code, out = run(capsys, "length", "--p", "5", "--s", "4", "--f2", "25", "--f1", "0", "--f0", "125")
    rec = json.loads(out)
    assert code == 0 and rec["length"] == 4 and rec["trivial"] is False


def test_length_trivial_square(capsys):
    code, out = run(capsys, "length", "--p", "3", "--s", "1", "--f2", "1", "--f1", "2", "--f0", "1")
    rec = json.loads(out)
    assert code == 0 and rec["length"] == "inf" and rec["trivial"] is True


def test_length_negative_inputs_canonicalised(capsys):
    code, out = run(capsys, "length", "--p", "3", "--s", "2", "--f2", "-8", "--f1", "-7", "--f0", "10")
    rec = json.loads(out)
    assert (rec["f2"], rec["f1"], rec["f0"]) == (1, 2, 1)


@pytest.mark.parametrize("p,s", [("4", "1"), ("9", "1"), ("3", "0")])
def test_length_bad_modulus(capsys, p, s):
    code = main(["length", "--p", p, "--s", s, "--f2", "1", "--f1", "0", "--f0", "0"])
    assert code == 2


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["opt", "--p", "3"])
    assert exc.value.code == 2


def test_opt_both(capsys):
    code, out = run(capsys, "opt", "--p", "3", "--s", "2", "--f2", "2", "--method", "both")
    rec = json.loads(out)
    assert code == 0 and rec["opt_formula"] == rec["opt_brute"] == 5 and rec["ml"] == 4
    assert rec["t2"] == 0 and rec["g2_character"] == "nonsquare"


def test_opt_infinite(capsys):
    code, out = run(capsys, "opt", "--p", "3", "--s", "1", "--f2", "2", "--method", "both")
    rec = json.loads(out)
    assert code == 0 and rec["opt_formula"] == rec["opt_brute"] == rec["ml"] == "inf"


def test_opt_formula_only(capsys):
    code, out = run(capsys, "opt", "--p", "5", "--s", "4", "--f2", "25", "--method", "formula")
    rec = json.loads(out)
    assert code == 0 and rec["opt_formula"] == 5 and rec["opt_brute"] is None
    assert rec["t2"] == 2 and rec["g2_character"] == "square"


def test_opt_zero_class(capsys):
    code, out = run(capsys, "opt", "--p", "5", "--s", "2", "--f2", "0")
    rec = json.loads(out)
    assert rec["t2"] == "inf" and rec["g2_character"] == "zero"


def test_opt_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("BUCHI_MAX_MODULUS", "100")
    assert main(["opt", "--p", "5", "--s", "4", "--f2", "25", "--method", "brute"]) == 3
    # flag wins over env
    code, _ = run(capsys, "--max-modulus", "1000", "opt", "--p", "5", "--s", "4", "--f2", "25", "--method", "brute")
    assert code == 0


def test_opt_disagreement_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(formulas, "_unit_case", lambda p, s, unit: 99)
    code, _ = run(capsys, "opt", "--p", "3", "--s", "2", "--f2", "2", "--method", "both")
    assert code == 1


def test_sweep_csv(capsys):
    code, out = run(capsys, "sweep", "--p", "3", "--s", "2", "--all", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 10
    row0 = dict(zip(CSV_HEADER, lines[1].split(",")))
    assert row0["f2"] == "0" and row0["t2"] == "inf" and row0["opt_formula"] == "3"
    assert row0["elapsed_ms"] == ""


def test_sweep_representatives(capsys):
    code, out = run(capsys, "sweep", "--p", "5", "--s", "4", "--representatives", "--jobs", "2")
    recs = records_from_csv(out)
    assert code == 0
    assert [r.f2 for r in recs] == [0, 1, 2, 5, 10, 25, 50, 125, 250]
    assert all(r.opt_formula == r.opt_brute for r in recs)


def test_sweep_csv_json_agree(capsys):
    _, csv_out = run(capsys, "sweep", "--p", "3", "--s", "3", "--format", "csv")
    _, json_out = run(capsys, "sweep", "--p", "3", "--s", "3", "--format", "json")
    from_json = [OutputRecord.from_dict(d) for d in json.loads(json_out)]
    assert records_from_csv(csv_out) == from_json
    inf_rows = [r for r in from_json if r.opt_brute == "inf"]
    assert [r.f2 for r in inf_rows] == [18]
    assert all(r.ml == "inf" and r.opt_formula == "inf" for r in inf_rows)


def test_record_json_round_trip(capsys):
    _, out = run(capsys, "sweep", "--p", "5", "--s", "2", "--format", "json", "--timing")
    for data in json.loads(out):
        rec = OutputRecord.from_dict(data)
        assert rec.to_dict() == data
        assert rec.elapsed_ms is not None
        if rec.opt_brute != "inf":
            assert rec.opt_brute == rec.ml + 1


def test_sweep_formula_only(capsys):
    code, out = run(capsys, "sweep", "--p", "7", "--s", "3", "--method", "formula", "--representatives")
    recs = records_from_csv(out)
    assert code == 0 and all(r.opt_brute is None and r.witness is None for r in recs)


def test_sweep_writes_file_atomically(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out = run(capsys, "sweep", "--p", "3", "--s", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("p,s,modulus")
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_sweep_cap(capsys):
    assert main(["--max-modulus", "100", "sweep", "--p", "5", "--s", "3"]) == 3


def test_verify_grid_file(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([{"p": 3, "s": 2, "mode": "all"}, {"p": 5, "s": 2, "mode": "representatives"}]))
    code, out = run(capsys, "verify", "--grid", str(grid), "--format", "json", "--no-lemmas")
    report = json.loads(out)
    assert code == 0 and report["status"] == "PASS" and len(report["points"]) == 2


def test_verify_missing_grid(capsys):
    assert main(["verify", "--grid", "missing.json"]) == 2


def test_verify_bad_grid(tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text('{"p": 3}')
    assert main(["verify", "--grid", str(grid)]) == 2
    grid.write_text("not json")
    assert main(["verify", "--grid", str(grid)]) == 2


def test_verify_corrupted_build_exits_1(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(formulas, "_unit_case", lambda p, s, unit: 99)
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([{"p": 3, "s": 2}]))
    assert main(["verify", "--grid", str(grid), "--no-lemmas"]) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "buchi", "opt", "--p", "3", "--s", "2", "--f2", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["opt_brute"] == 5


def test_jobs_from_env(monkeypatch, capsys):
    monkeypatch.setenv("BUCHI_JOBS", "2")
    code, out = run(capsys, "sweep", "--p", "3", "--s", "2")
    assert code == 0 and len(out.splitlines()) == 10
    monkeypatch.setenv("BUCHI_JOBS", "many")
    assert main(["sweep", "--p", "3", "--s", "2"]) == 2
