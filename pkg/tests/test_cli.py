import json

import pytest
from click.testing import CliRunner

from cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def simulate_file(runner, path, epsilon=0.5, n=20_000, seed=42, *extra):
    return invoke(runner, "simulate", "--lambda-b", 1, "--epsilon", epsilon, "--n", n,
                  "--seed", seed, "--out", path, *extra)


class TestSimulate:
    def test_writes_dataset_and_summary(self, runner, tmp_path):
        path = tmp_path / "d.csv"
        result = simulate_file(runner, path, 0.5, 100_000)
        assert result.exit_code == 0, result.stderr
        lines = path.read_text().splitlines()
        assert lines[:4] == ["# lambda_B=1", "# epsilon=0.5", "# seed=42", "# sampler=direct"]
        assert lines[4] == "particle_id,branch_index,decay_time"
        assert len(lines) == 5 + 100_000
        summary = dict(line.split("=") for line in result.stdout.splitlines())
        assert summary["n"] == "100000"
        assert float(summary["lambda_A_hat"]) == pytest.approx(0.5, abs=0.01)

    def test_byte_identical_runs(self, runner, tmp_path):
        first, second, threaded = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
        assert simulate_file(runner, first).exit_code == 0
        assert simulate_file(runner, second).exit_code == 0
        assert simulate_file(runner, threaded, 0.5, 20_000, 42, "--threads", 8).exit_code == 0
        assert first.read_bytes() == second.read_bytes() == threaded.read_bytes()

    def test_mechanistic_sampler_tag(self, runner, tmp_path):
        path = tmp_path / "m.csv"
        assert simulate_file(runner, path, 0.5, 100, 1, "--sampler", "mechanistic").exit_code == 0
        assert "# sampler=mechanistic" in path.read_text()

    def test_epsilon_one_is_rejected(self, runner, tmp_path):
        result = simulate_file(runner, tmp_path / "d.csv", 1)
        assert result.exit_code == 2
        assert "epsilon" in result.stderr

    def test_output_is_required(self, runner):
        result = invoke(runner, "simulate", "--lambda-b", 1, "--n", 10)
        assert result.exit_code == 2

    def test_missing_output_directory(self, runner, tmp_path):
        result = simulate_file(runner, tmp_path / "absent" / "d.csv", 0.5, 10)
        assert result.exit_code == 2
        assert "absent" in result.stderr

    def test_zero_particles(self, runner, tmp_path):
        result = simulate_file(runner, tmp_path / "d.csv", 0.5, 0)
        assert result.exit_code == 2
        assert "n_particles" in result.stderr

    def test_config_file_with_flag_override(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("# experiment\nlambda-b=2\nepsilon=0.25\nn=100\nseed=3\n")
        path = tmp_path / "d.csv"
        result = invoke(runner, "simulate", "--config", config, "--n", 50, "--out", path)
        assert result.exit_code == 0, result.stderr
        lines = path.read_text().splitlines()
        assert lines[0] == "# lambda_B=2"
        assert lines[2] == "# seed=3"
        assert len(lines) == 5 + 50

    def test_unknown_config_key(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("lambda-b=1\ncolour=blue\n")
        result = invoke(runner, "simulate", "--config", config, "--out", tmp_path / "d.csv")
        assert result.exit_code == 2
        assert "colour" in result.stderr


class TestEstimate:
    def test_json(self, runner, tmp_path):
        path = tmp_path / "d.csv"
        assert simulate_file(runner, path).exit_code == 0
        result = invoke(runner, "estimate", path, "--lambda-b", 1)
        assert result.exit_code == 0, result.stderr
        data = json.loads(result.stdout)
        assert data["epsilon_hat"] == pytest.approx(0.5, abs=4 * 0.5 / 20_000**0.5)
        assert data["n"] == 20_000
        assert data["epsilon_upper_limit"] >= data["epsilon_hat"]

    def test_csv(self, runner, tmp_path):
        path = tmp_path / "d.csv"
        assert simulate_file(runner, path, 0.5, 500).exit_code == 0
        result = invoke(runner, "estimate", path, "--lambda-b", 1, "--format", "csv")
        assert result.exit_code == 0
        header, row = result.stdout.splitlines()
        assert header.startswith("lambda_A_hat,lambda_A_ci_lo,lambda_A_ci_hi,epsilon_hat")

    def test_empty_file(self, runner, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        result = invoke(runner, "estimate", path, "--lambda-b", 1)
        assert result.exit_code == 2

    def test_malformed_file_reports_line(self, runner, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("particle_id,branch_index,decay_time\n0,1,0.5\n1,1,oops\n")
        result = invoke(runner, "estimate", path, "--lambda-b", 1)
        assert result.exit_code == 2
        assert "line 3" in result.stderr

    @pytest.mark.parametrize("row", ["1,99999999999999999999,0.5", "1,1,inf", "1,1,nan"])
    def test_out_of_range_values_report_line(self, runner, tmp_path, row):
        path = tmp_path / "bad.csv"
        path.write_text(f"particle_id,branch_index,decay_time\n0,1,0.5\n{row}\n2,1,0.7\n")
        result = invoke(runner, "estimate", path, "--lambda-b", 1)
        assert result.exit_code == 2
        assert "line 3" in result.stderr

    def test_infinite_statistic_is_null(self, runner, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("# lambda_B=1\n# epsilon=0\nparticle_id,branch_index,decay_time\n0,1,0.5\n1,2,0.7\n2,1,1.1\n")
        result = invoke(runner, "estimate", path, "--lambda-b", 1)
        assert result.exit_code == 0, result.stderr

        def reject(constant):
            raise ValueError(constant)

        data = json.loads(result.stdout, parse_constant=reject)
        assert data["chi2_stat"] is None
        assert data["chi2_pass"] is False

    def test_missing_file(self, runner, tmp_path):
        result = invoke(runner, "estimate", tmp_path / "absent.csv", "--lambda-b", 1)
        assert result.exit_code == 2


class TestFigure2:
    def test_table(self, runner):
        result = invoke(runner, "figure2")
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "t_over_W,S1,S2,S3,S4,S5"
        assert lines[1] == "0,1,1,1,1,1"
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        assert len(rows) == 61
        assert rows[-1][0] == 6.0
        for row in rows:
            assert row[1] <= row[2] <= row[3] <= row[4] <= row[5]

    def test_values_at_unit_time(self, runner):
        result = invoke(runner, "figure2", "--lambda-b", 2.5)
        rows = [[float(v) for v in line.split(",")] for line in result.stdout.splitlines()[1:]]
        (row,) = [r for r in rows if r[0] == pytest.approx(1.0)]
        expected = [0.367879, 0.735759, 0.919699, 0.981012, 0.996340]
        assert row[1:] == pytest.approx(expected, abs=1e-6)

    def test_invalid_points(self, runner):
        assert invoke(runner, "figure2", "--points", 1).exit_code == 2


class TestVerify:
    def test_default_lattice_passes(self, runner):
        result = invoke(runner, "verify")
        assert result.exit_code == 0, result.stdout
        assert "FAIL" not in result.stdout
        assert result.stdout.splitlines()[-1].endswith("passed")

    def test_unattainable_tolerance(self, runner):
        result = invoke(runner, "verify", "--tol", "1e-30", "--epsilon", 0.5, "--epsilon", 0.9, "--lambda-b", 1)
        assert result.exit_code == 1
        assert "FAIL" in result.stdout

    def test_epsilon_zero_skip_notice(self, runner):
        result = invoke(runner, "verify", "--epsilon", 0, "--lambda-b", 1)
        assert result.exit_code == 0
        assert "SKIP beta_series" in result.stdout

    def test_json_lines(self, runner):
        result = invoke(runner, "verify", "--epsilon", 0.5, "--lambda-b", 1, "--json")
        assert result.exit_code == 0
        reports = [json.loads(line) for line in result.stdout.splitlines()]
        assert {r["identity_name"] for r in reports} == {
            "beta_series", "tau_A_series", "f_A_series", "S_A_column_sum", "pdf_normalization",
        }
        assert all(r["pass"] for r in reports)


class TestPower:
    def test_examples(self, runner):
        assert int(invoke(runner, "power", 0.001, 0.95).stdout) == pytest.approx(2.7e6, rel=0.01)
        assert invoke(runner, "power", 0.1, 0.95).stdout.strip() == "220"
        assert invoke(runner, "power", 0.999).stdout.strip() == "1"

    def test_domain(self, runner):
        assert invoke(runner, "power", 0).exit_code == 2
        assert invoke(runner, "power", 1).exit_code == 2


class TestTree:
    def test_export_to_stdout(self, runner):
        result = invoke(runner, "tree", "--lambda-b", 1, "--horizon", 10, "--seed", 3)
        assert result.exit_code == 0, result.stderr
        lines = result.stdout.splitlines()
        assert lines[:4] == ["# lambda_B=1", "# epsilon=0", "# horizon=10", "# seed=3"]
        assert lines[4] == "event_ordinal,event_time"
        times = [float(line.split(",")[1]) for line in lines[5:]]
        assert times == sorted(times)
        assert all(0.0 < t <= 10.0 for t in times)
        assert invoke(runner, "tree", "--lambda-b", 1, "--horizon", 10, "--seed", 3).stdout == result.stdout

    def test_horizon_required(self, runner):
        assert invoke(runner, "tree", "--lambda-b", 1).exit_code == 2


class TestCoverage:
    def test_summary(self, runner):
        args = ("coverage", "--lambda-b", 1, "--epsilon", 0.1, "--n", 1_000, "--replicates", 10, "--seed", 4)
        result = invoke(runner, *args)
        assert result.exit_code == 0, result.stderr
        data = json.loads(result.stdout)
        assert data["replicates"] == 10
        assert 0.0 <= data["coverage"] <= 1.0
        assert "duration" not in data
        assert invoke(runner, *args).stdout == result.stdout

    def test_export_replicate_records(self, runner, tmp_path):
        path = tmp_path / "replicates.jsonl"
        args = ("coverage", "--lambda-b", 1, "--epsilon", 0.1, "--n", 500, "--replicates", 4, "--seed", 4)
        result = invoke(runner, *args, "--export", path)
        assert result.exit_code == 0, result.stderr
        records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
        assert len(records) == 4
        assert len({r["seed"] for r in records}) == 4
        assert json.loads(result.stdout)["replicates"] == 4
