"""Command-line entry points: sweep, capacity, validate, serve."""

import json

import pytest
from click.testing import CliRunner

import scansim.experiments as experiments
from scansim.cli import main
from scansim.experiments import ExperimentSpec, SweepRange, run_sweep


@pytest.fixture()
def runner():
    return CliRunner()


SWEEP_FLAGS = [
    "sweep",
    "--phrase",
    "a_",
    "--param",
    "lambda",
    "--start",
    "0.0",
    "--stop",
    "0.2",
    "--step",
    "0.1",
    "--seed",
    "7",
    "--runs",
    "200",
]


class TestSweepCommand:
    def test_stdout_matches_library_output(self, runner):
        result = runner.invoke(main, SWEEP_FLAGS)
        assert result.exit_code == 0, result.output
        spec = ExperimentSpec(
            phrase="a_",
            sweep_param="lambda",
            sweep=SweepRange(0.0, 0.2, 0.1),
            seeds=(7,),
            runs=200,
        )
        assert result.output == run_sweep(spec).to_csv()

    def test_out_flag_writes_file(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(main, SWEEP_FLAGS + ["--out", str(out)])
        assert result.exit_code == 0, result.output
        text = out.read_text()
        assert text.startswith("# sweep fingerprint=sha256:")
        assert "analytic_wpm" in text

    def test_spec_file_drives_the_run(self, runner, tmp_path):
        spec = ExperimentSpec(
            phrase="a_",
            sweep_param="delta",
            sweep=SweepRange(0.0, 0.1, 0.1),
            seeds=(3,),
            runs=100,
        )
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec.to_dict()))
        result = runner.invoke(main, ["sweep", "--spec", str(path)])
        assert result.exit_code == 0, result.output
        assert result.output == run_sweep(spec).to_csv()

    def test_flags_override_spec_file(self, runner, tmp_path):
        spec = ExperimentSpec(
            phrase="a_",
            sweep_param="delta",
            sweep=SweepRange(0.0, 0.1, 0.1),
            seeds=(3,),
            runs=100,
        )
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec.to_dict()))
        result = runner.invoke(main, ["sweep", "--spec", str(path), "--phrase", "aa_"])
        assert result.exit_code == 0, result.output
        assert "# phrase=aa " in result.output

    def test_missing_required_flags_name_them(self, runner):
        result = runner.invoke(main, ["sweep", "--phrase", "a_"])
        assert result.exit_code != 0
        assert "--param" in result.output
        assert "--start" in result.output

    def test_configuration_errors_become_clean_failures(self, runner):
        result = runner.invoke(
            main,
            [
                "sweep",
                "--phrase",
                "a_",
                "--param",
                "delta",
                "--start",
                "0",
                "--stop",
                "0.1",
                "--step",
                "0.1",
                "--sigma",
                "-1",
            ],
        )
        assert result.exit_code != 0
        assert "sigma" in result.output
        assert "Traceback" not in result.output

    def test_lambda_long_flag_alias(self, runner):
        result = runner.invoke(
            main,
            [
                "sweep",
                "--phrase",
                "a_",
                "--param",
                "delta",
                "--start",
                "0",
                "--stop",
                "0",
                "--step",
                "1",
                "--lambda",
                "0.05",
                "--engine",
                "analytic",
            ],
        )
        assert result.exit_code == 0, result.output


class TestCapacityCommand:
    def test_symmetric_anchor_row(self, runner):
        result = runner.invoke(main, ["capacity", "--d", "0", "--g", "1"])
        assert result.exit_code == 0, result.output
        lines = result.output.strip().split("\n")
        assert lines[0] == "d,g,f,beta_star,rate_bits_per_s,penalty,adjusted_rate_bits_per_s"
        cells = lines[1].split(",")
        assert float(cells[3]) == pytest.approx(0.5, abs=1e-6)
        assert float(cells[4]) == pytest.approx(1.0)
        assert float(cells[6]) == pytest.approx(1.0)

    def test_noisy_switch_scales_the_rate(self, runner):
        result = runner.invoke(main, ["capacity", "--d", "0", "--g", "1", "--f", "0.5"])
        cells = result.output.strip().split("\n")[1].split(",")
        assert float(cells[5]) == 0.0
        assert float(cells[6]) == 0.0

    def test_out_flag(self, runner, tmp_path):
        out = tmp_path / "capacity.csv"
        result = runner.invoke(main, ["capacity", "--d", "1", "--g", "0.1", "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_text().startswith("d,g,f,")

    def test_invalid_inputs_fail_cleanly(self, runner):
        result = runner.invoke(main, ["capacity", "--d", "0", "--g", "-1"])
        assert result.exit_code != 0
        assert "Traceback" not in result.output


class TestValidateCommand:
    def test_noiseless_agreement_exits_zero(self, runner):
        result = runner.invoke(
            main,
            [
                "validate",
                "--phrase",
                "a_",
                "--param",
                "delta",
                "--start",
                "0",
                "--stop",
                "0",
                "--step",
                "1",
                "--runs",
                "300",
                "--seed",
                "5",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "PASS" in result.output

    def test_disagreement_exits_nonzero(self, runner, monkeypatch):
        real = experiments._analytic_pmf

        def shifted(chain, kind):
            pmf = real(chain, kind)
            return type(pmf)(support=pmf.support + 1, probs=pmf.probs)

        monkeypatch.setattr(experiments, "_analytic_pmf", shifted)
        result = runner.invoke(
            main,
            [
                "validate",
                "--phrase",
                "a_",
                "--param",
                "delta",
                "--start",
                "0",
                "--stop",
                "0",
                "--step",
                "1",
                "--runs",
                "300",
            ],
        )
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_report_file(self, runner, tmp_path):
        out = tmp_path / "report.txt"
        result = runner.invoke(
            main,
            [
                "validate",
                "--phrase",
                "a_",
                "--param",
                "delta",
                "--start",
                "0",
                "--stop",
                "0",
                "--step",
                "1",
                "--runs",
                "200",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "PASS" in out.read_text()


class TestServeCommand:
    def test_help_mentions_host_and_port(self, runner):
        result = runner.invoke(main, ["serve", "--help"])
        assert result.exit_code == 0
        assert "--host" in result.output
        assert "--port" in result.output

    def test_serve_invokes_uvicorn_with_the_app(self, runner, monkeypatch):
        captured = {}

        def fake_run(app, host, port):
            captured["app"] = app
            captured["host"] = host
            captured["port"] = port

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        result = runner.invoke(main, ["serve", "--port", "8123"])
        assert result.exit_code == 0, result.output
        assert captured["port"] == 8123
        routes = {route.path for route in captured["app"].routes}
        assert "/sessions" in routes
        assert "/healthz" in routes


class TestTopLevel:
    def test_help_lists_subcommands(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for name in ("sweep", "capacity", "validate", "serve"):
            assert name in result.output
