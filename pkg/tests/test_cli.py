import json

import pytest

from specblock.cli import main
from specblock.report import emit_json


def write_problem(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


M3_PROBLEM = {"blocks": {"A": [[2, 0], [0, 10]], "B": [[1], [1]],
                         "C": [[-1]]}, "rb": [0.0, 2.0]}

MHD_PROBLEM = {"mhd": {"grid_n": 33, "rho": "constant", "va2": "constant",
                       "vs2": "constant", "kperp": "constant",
                       "kpar": "constant", "g": 0.0}}


def run_to_file(tmp_path, args):
    out = tmp_path / "report.json"
    code = main(args + ["--out", str(out)])
    return code, json.loads(out.read_text())


class TestExitCodes:
    def test_enclose_passes_on_fixture(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code, rep = run_to_file(tmp_path, ["enclose", "--input", path])
        assert code == 0
        assert rep["summary"]["fail"] == 0
        assert rep["summary"]["pass"] > 0

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{oops")
        assert main(["enclose", "--input", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys):
        assert main(["enclose", "--input", "/nonexistent.json"]) == 2
        capsys.readouterr()

    def test_corrupted_selftest_exits_1(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SPECBLOCK_SELFTEST_CORRUPT", "1")
        out = tmp_path / "r.json"
        code = main(["selftest", "--seed", "7", "--out", str(out)])
        assert code == 1
        rep = json.loads(out.read_text())
        assert rep["summary"]["fail"] >= 1


class TestEnclose:
    def test_decoupled_blocks_degenerate_windows(self, tmp_path):
        payload = {"blocks": {"A": [[2, 0], [0, 10]], "B": [[0], [0]],
                              "C": [[-1]]}}
        path = write_problem(tmp_path, "p.json", payload)
        code, rep = run_to_file(tmp_path, ["enclose", "--input", path])
        assert code == 0
        assert rep["summary"]["fail"] == 0
        names = {c["name"]: c for c in rep["checks"]}
        win = names["inclusion-window/mu=2"]
        assert win["outputs"]["lo"] == pytest.approx(-1.0)
        assert win["outputs"]["hi"] == pytest.approx(2.0)

    def test_every_check_carries_anchor(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        _, rep = run_to_file(tmp_path, ["enclose", "--input", path])
        assert all(c["anchor"] for c in rep["checks"])

    def test_hypothesis_failures_not_applicable(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code, rep = run_to_file(tmp_path, ["enclose", "--input", path])
        statuses = {c["status"] for c in rep["checks"]}
        assert "not-applicable" in statuses  # single-pair fixture
        assert code == 0


class TestAngular:
    def test_codim_one_at_alpha_six(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code, rep = run_to_file(
            tmp_path, ["angular", "--input", path, "--alpha", "6"])
        assert code == 0
        names = {c["name"]: c for c in rep["checks"]}
        assert names["angular/operator"]["outputs"]["codim"] == 1
        assert names["angular/delta"]["outputs"]["delta"] == pytest.approx(
            1.0 / 14.0, abs=1e-12)

    def test_default_alpha_uses_landmark(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code, rep = run_to_file(tmp_path, ["angular", "--input", path])
        names = {c["name"]: c for c in rep["checks"]}
        assert names["angular/codim-kappa"]["status"] == "pass"
        assert names["angular/codim-kappa"]["outputs"]["codim"] == 0


class TestBasisSoqMhd:
    def test_basis_fixture(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code, rep = run_to_file(tmp_path, ["basis", "--input", path])
        assert code == 0
        assert rep["summary"]["fail"] == 0

    def test_soq_full_dimension_degenerates(self, tmp_path):
        # a ladder with two valid pair windows; full-space trial basis
        payload = {"blocks": {"A": [[2, 0, 0, 0], [0, 10, 0, 0],
                                    [0, 0, 40, 0], [0, 0, 0, 90]],
                              "B": [[0.3], [0.3], [0.3], [0.3]],
                              "C": [[-1]]}, "rb": [0.0, 0.36]}
        path = write_problem(tmp_path, "p.json", payload)
        code, rep = run_to_file(tmp_path, ["soq", "--input", path])
        assert code == 0
        check = rep["checks"][0]
        assert check["status"] in ("pass", "not-applicable")
        if check["status"] == "pass":
            for point in check["outputs"]["points"]:
                if point["admitted"]:
                    lo, hi = point["interval"]
                    assert hi - lo <= 1e-6

    def test_mhd_pipeline(self, tmp_path):
        path = write_problem(tmp_path, "mhd.json", MHD_PROBLEM)
        code, rep = run_to_file(
            tmp_path, ["mhd", "--input", path, "--n", "32", "--n-max", "4"])
        assert code == 0
        assert rep["summary"]["fail"] == 0
        assert any(c["name"] == "mhd/projection-decay" for c in rep["checks"])

    def test_mhd_command_requires_profile(self, tmp_path, capsys):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        assert main(["mhd", "--input", path]) == 2
        capsys.readouterr()

    def test_profile_accepted_by_enclose(self, tmp_path):
        path = write_problem(tmp_path, "mhd.json", MHD_PROBLEM)
        code, rep = run_to_file(
            tmp_path, ["enclose", "--input", path, "--n", "16"])
        assert code == 0
        assert rep["summary"]["fail"] == 0


class TestOutputPlumbing:
    def test_stdout_report(self, tmp_path, capsys):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        code = main(["enclose", "--input", path])
        captured = capsys.readouterr()
        assert code == 0
        rep = json.loads(captured.out)
        assert rep["command"] == "enclose"
        assert len(rep["input_digest"]) == 64

    def test_report_round_trips(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        out = tmp_path / "rep.json"
        main(["enclose", "--input", path, "--out", str(out)])
        text = out.read_text().rstrip("\n")
        assert emit_json(json.loads(text)) == text

    def test_csv_per_family(self, tmp_path):
        path = write_problem(tmp_path, "m3.json", M3_PROBLEM)
        csv_dir = tmp_path / "csv"
        main(["enclose", "--input", path, "--csv", str(csv_dir)])
        names = sorted(p.name for p in csv_dir.iterdir())
        assert "dist-bound.csv" in names
        assert "inclusion-window.csv" in names
        header = (csv_dir / "dist-bound.csv").read_text().splitlines()[0]
        assert header.split(",")[:3] == ["name", "status", "anchor"]

    def test_selftest_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["selftest", "--seed", "7", "--out", str(a)]) in (0, 1)
        assert main(["selftest", "--seed", "7", "--out", str(b)]) in (0, 1)
        assert a.read_bytes() == b.read_bytes()
