import json

import pytest
from click.testing import CliRunner

from cantorcount.cli import main


@pytest.fixture
def runner(tmp_path, monkeypatch):
    monkeypatch.setenv("CANTOR_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.chdir(tmp_path)
    return CliRunner()


class TestEnumerate:
    def test_single_q(self, runner):
        result = runner.invoke(main, ["enumerate", "--q", "82"])
        assert result.exit_code == 0
        assert "n_q=16" in result.output

    def test_range(self, runner, tmp_path):
        result = runner.invoke(main, ["enumerate", "--q-range", "2..10"])
        assert result.exit_code == 0
        assert (tmp_path / "records-2-10.csv").exists()
        assert (tmp_path / "records-2-10.csv.manifest.json").exists()

    def test_missing_target_is_domain_error(self, runner):
        result = runner.invoke(main, ["enumerate"])
        assert result.exit_code == 2

    def test_bad_range_is_domain_error(self, runner):
        result = runner.invoke(main, ["enumerate", "--q-range", "abc"])
        assert result.exit_code == 2

    def test_word_budget_exit_code(self, runner):
        # ell(1594323 + 1) is large; the word method with default budget is fine,
        # but a giant prime forces 2^ell far over budget
        result = runner.invoke(main, ["enumerate", "--q", "104729", "--method", "words"])
        assert result.exit_code == 3

    def test_store_integrity_exit_code(self, runner, tmp_path):
        store = tmp_path / "data" / "b3_F0_2"
        store.mkdir(parents=True)
        (store / "records-2-5.jsonl").write_text(
            json.dumps({"schema": 99, "system": "b=3,F=0,2"}) + "\n"
        )
        result = runner.invoke(main, ["enumerate", "--q", "4"])
        assert result.exit_code == 4


class TestCountsAndPredict:
    def test_count_csv(self, runner, tmp_path):
        result = runner.invoke(main, ["count", "--t-max", "30", "-o", "c.csv"])
        assert result.exit_code == 0
        lines = (tmp_path / "c.csv").read_bytes().split(b"\r\n")
        assert lines[0] == b"T,N_tilde,N,N_tilde_star,N_star"

    def test_exclude_unit(self, runner, tmp_path):
        runner.invoke(main, ["count", "--t-max", "3", "--exclude-unit", "-o", "x.csv"])
        rows = (tmp_path / "x.csv").read_text().strip().splitlines()
        first = rows[1].split(",")
        assert first[3] == "0"  # cumulative purely periodic count without 0/1, 1/1

    def test_predict_csv_schema(self, runner, tmp_path):
        result = runner.invoke(main, ["predict", "--t-max", "50", "-o", "p.csv"])
        assert result.exit_code == 0
        header = (tmp_path / "p.csv").read_text().splitlines()[0]
        assert header == "T,N_tilde,F,M,ratio_M,ratio_F"


class TestSimulateAndTailcheck:
    def test_deterministic_output(self, runner, tmp_path):
        args = ["simulate", "--model", "star", "--q", "13",
                "--trials", "50", "--seed", "11", "-o", "s.csv"]
        assert runner.invoke(main, args).exit_code == 0
        first = (tmp_path / "s.csv").read_bytes()
        assert runner.invoke(main, args).exit_code == 0
        assert (tmp_path / "s.csv").read_bytes() == first

    def test_window_argument(self, runner):
        result = runner.invoke(main, ["simulate", "--model", "dstar",
                                      "--window", "0.5:20", "--trials", "10",
                                      "--seed", "1"])
        assert result.exit_code == 0

    def test_bad_window_is_domain_error(self, runner):
        result = runner.invoke(main, ["simulate", "--model", "star",
                                      "--window", "oops", "--trials", "10",
                                      "--seed", "1"])
        assert result.exit_code == 2

    def test_tailcheck(self, runner, tmp_path):
        result = runner.invoke(main, ["tailcheck", "--eps", "0.3", "--k-max", "6",
                                      "--trials", "200", "--seed", "3", "-o", "t.csv"])
        assert result.exit_code == 0
        assert (tmp_path / "t.csv").exists()


class TestBourgainAndSymmetry:
    def test_bourgain_records(self, runner, tmp_path):
        result = runner.invoke(main, ["bourgain", "--q-max", "400", "-o", "b.csv"])
        assert result.exit_code == 0
        rows = (tmp_path / "b.csv").read_text().strip().splitlines()
        assert [r.split(",")[0] for r in rows[1:]] == ["3", "30", "84", "146", "386"]

    def test_symmetry_pad(self, runner, tmp_path):
        result = runner.invoke(main, ["symmetry", "--kind", "pad", "--r-max", "3",
                                      "-o", "sy.csv"])
        assert result.exit_code == 0
        header = (tmp_path / "sy.csv").read_text().splitlines()[0]
        assert header.startswith("r,q_r,N_q,X,Y_floor,Y_round,Z")


class TestTables:
    def test_table1_matches(self, runner):
        result = runner.invoke(main, ["tables", "--which", "1"])
        assert result.exit_code == 0
        assert "match expected" in result.output

    def test_manifest_written(self, runner, tmp_path):
        runner.invoke(main, ["tables", "--which", "1"])
        manifest = json.loads((tmp_path / "table1.csv.manifest.json").read_text())
        assert "command" in manifest and "wall_time_s" in manifest
