"""Command-line entry point: result lines, error lines and exit codes."""
import json
import os

import numpy as np
import pytest

from approx_discontinuity.cli import EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from approx_discontinuity.metrics import SweepResult
from approx_discontinuity.plotting import emit_sweep_csv
from test_experiments import tiny_doc


def _last_json_line(text: str) -> dict:
    return json.loads(text.strip().splitlines()[-1])


def _write_config(tmp_path, experiment="table1_dm", **extra) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(tiny_doc(experiment, tmp_path / "out", **extra)))
    return str(path)


class TestMain:
    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_USAGE
        assert "usage" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [
        ["run"],
        ["sweep", "--config", "c.json", "--dropout", "sometimes"],
        ["demo", "--precision", "twelve"],
        ["bogus"],
    ])
    def test_usage_errors_are_json_lines(self, argv, capsys):
        assert main(argv) == EXIT_USAGE
        error = _last_json_line(capsys.readouterr().err)
        assert error["error"] == "UsageError"
        assert error["message"]

    def test_demo(self, tmp_path, capsys):
        assert main(["demo", "--precision", "12", "--out", str(tmp_path)]) == EXIT_OK
        result = _last_json_line(capsys.readouterr().out)
        assert all(result["checks"].values())
        assert os.path.exists(result["csv"][0])

    def test_missing_config_is_an_io_error(self, tmp_path, capsys):
        code = main(["run", "--config", str(tmp_path / "missing.json")])
        assert code == EXIT_IO
        error = _last_json_line(capsys.readouterr().err)
        assert error["error"] == "FileNotFoundError"

    def test_invalid_config_is_a_failure(self, tmp_path, capsys):
        path = _write_config(tmp_path, sweep={"points": 1})
        assert main(["run", "--config", path]) == EXIT_FAILURE
        error = _last_json_line(capsys.readouterr().err)
        assert error["error"] == "ConfigError"

    def test_invalid_precision_is_a_failure(self, tmp_path, capsys):
        assert main(["demo", "--precision", "2", "--out", str(tmp_path)]) == EXIT_FAILURE
        assert _last_json_line(capsys.readouterr().err)["error"] == "ConfigError"

    def test_train_then_dm_and_sweep_from_checkpoint(self, tmp_path, capsys):
        config = _write_config(tmp_path)
        assert main(["train", "--config", config]) == EXIT_OK
        trained = _last_json_line(capsys.readouterr().out)
        checkpoint = trained["checkpoints"][0]
        assert checkpoint.endswith("classifier.adpr")

        assert main(["dm", "--config", config, "--checkpoint", checkpoint]) == EXIT_OK
        dm = _last_json_line(capsys.readouterr().out)
        assert dm["d_m"] > 0
        assert dm["n_inputs"] == 120

        assert main(["sweep", "--config", config, "--checkpoint", checkpoint,
                     "--inputs", "5", "--eta-min", "0.01"]) == EXIT_OK
        sweep = _last_json_line(capsys.readouterr().out)
        assert len(sweep["summary"]["etas"]) == 3
        assert sweep["summary"]["etas"][-1] == pytest.approx(0.01)

    def test_damaged_checkpoint(self, tmp_path, capsys):
        config = _write_config(tmp_path)
        bad = tmp_path / "bad.adpr"
        bad.write_bytes(b"ADPR\x01\x00\x00\x00garbage")
        assert main(["dm", "--config", config, "--checkpoint", str(bad)]) == EXIT_FAILURE
        assert _last_json_line(capsys.readouterr().err)["error"] == "ChecksumError"

    def test_plot(self, tmp_path, capsys):
        paths = []
        for name, offset in (("first", 0.0), ("second", 1.0)):
            result = SweepResult(np.array([1e-1, 1e-2, 1e-3]), (0,),
                                 np.array([[1.0], [2.0], [3.0]]) + offset, np.zeros((3, 1)),
                                 np.zeros((3, 1), dtype=int), (0,), 0)
            paths.append(emit_sweep_csv(result, tmp_path / f"{name}.csv"))
        out = tmp_path / "plot.svg"
        assert main(["plot", "--csv", *paths, "--out", str(out), "--log-y"]) == EXIT_OK
        with open(out) as f:
            svg = f.read()
        assert "first" in svg and "second" in svg
        assert _last_json_line(capsys.readouterr().out)["svg"] == str(out)
