import json

import pytest

from thzce.cli import main, parse_config_file
from thzce.dataset import load_dataset
from thzce.errors import ConfigurationError
from thzce.evaluation import read_report


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(
        "\n".join(
            [
                "# tiny desk setup for CI",
                "num_antennas = 8",
                "total_paths = 4",
                "pn_var_tx = 2e-4",
                "pn_var_rx = 2e-4",
                "num_samples = 80",
                "hidden_units = 4",
                "max_epochs = 2",
                "patience = 1",
                "seed = 7",
            ]
        )
    )
    return path


class TestConfigFile:
    def test_value_parsing(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text(
            "num_antennas = 16\n"
            "gamma = 0.25  # trailing comment\n"
            "snr_grid = 0, 5, 10\n"
            "pilot_kind = random-qpsk\n"
        )
        values = parse_config_file(path)
        assert values == {
            "num_antennas": 16,
            "gamma": 0.25,
            "snr_grid": [0, 5, 10],
            "pilot_kind": "random-qpsk",
        }

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("antennas = 16\n")
        with pytest.raises(ConfigurationError, match="antennas"):
            parse_config_file(path)

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("num_antennas 16\n")
        with pytest.raises(ConfigurationError, match="key = value"):
            parse_config_file(path)


class TestGenerate:
    def test_writes_loadable_dataset(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "d.thzd"
        rc = main(
            ["generate", "--config", str(tiny_config), "--out", str(out), "--snr-db", "10"]
        )
        assert rc == 0
        assert "wrote" in capsys.readouterr().out
        ds = load_dataset(out)
        assert ds.num_samples == 80
        assert ds.num_antennas == 8
        assert ds.snr_db == 10.0

    def test_seed_controls_bytes(self, tiny_config, tmp_path):
        outs = []
        for name, seed in (("a.thzd", "1"), ("b.thzd", "1"), ("c.thzd", "2")):
            out = tmp_path / name
            assert main(
                ["generate", "--config", str(tiny_config), "--out", str(out), "--seed", seed]
            ) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert outs[0] != outs[2]

    def test_csv_export(self, tiny_config, tmp_path):
        out = tmp_path / "d.thzd"
        csv_out = tmp_path / "d.csv"
        assert main(
            ["generate", "--config", str(tiny_config), "--out", str(out), "--csv-out", str(csv_out)]
        ) == 0
        header = csv_out.read_text().splitlines()[0]
        assert header.startswith("re_y_1,")

    def test_requires_out(self, tiny_config, capsys):
        rc = main(["generate", "--config", str(tiny_config)])
        assert rc == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"]["type"] == "ConfigurationError"


class TestTrainEvaluate:
    def test_pipeline(self, tiny_config, tmp_path, capsys):
        data = tmp_path / "d.thzd"
        assert main(
            ["generate", "--config", str(tiny_config), "--out", str(data), "--snr-db", "10"]
        ) == 0
        model = tmp_path / "m.thzm"
        rc = main(
            [
                "train", "--config", str(tiny_config), "--data", str(data),
                "--out", str(model), "--estimators", "bilstm-gru",
            ]
        )
        assert rc == 0
        assert model.exists()
        report_csv = tmp_path / "eval.csv"
        rc = main(
            [
                "evaluate", "--data", str(data), "--model", str(model),
                "--estimators", "ls,mmse", "--out", str(report_csv),
            ]
        )
        assert rc == 0
        report = read_report(report_csv)
        names = sorted(r.estimator for r in report.rows)
        assert names == ["bilstm-gru", "ls", "mmse"]

    def test_evaluate_pretty_output(self, tiny_config, tmp_path, capsys):
        data = tmp_path / "d.thzd"
        main(["generate", "--config", str(tiny_config), "--out", str(data)])
        capsys.readouterr()
        rc = main(["evaluate", "--data", str(data), "--estimators", "ls"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "estimator" in out and "ls" in out

    def test_train_rejects_classical(self, tiny_config, tmp_path, capsys):
        data = tmp_path / "d.thzd"
        main(["generate", "--config", str(tiny_config), "--out", str(data)])
        rc = main(
            [
                "train", "--config", str(tiny_config), "--data", str(data),
                "--out", str(tmp_path / "m.thzm"), "--estimators", "ls",
            ]
        )
        assert rc == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert "neural" in err["error"]["message"]

    def test_missing_data_file(self, tmp_path, capsys):
        rc = main(["evaluate", "--data", str(tmp_path / "absent.thzd"), "--estimators", "ls"])
        assert rc == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"]["type"] == "FileNotFoundError"


class TestSweeps:
    def test_snr_sweep_rows_and_manifest(self, tiny_config, tmp_path):
        out = tmp_path / "snr.csv"
        rc = main(
            [
                "sweep-snr", "--config", str(tiny_config), "--out", str(out),
                "--estimators", "ls,mmse", "--snr-db", "0", "10",
                "--num-samples", "200",
            ]
        )
        assert rc == 0
        report = read_report(out)
        assert len(report.rows) == 4
        manifest = json.loads((tmp_path / "snr.csv.manifest.json").read_text())
        assert manifest["seed"] == 7
        assert manifest["code_version"]

    def test_sweep_rerun_is_byte_identical(self, tiny_config, tmp_path):
        blobs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            assert main(
                [
                    "sweep-snr", "--config", str(tiny_config), "--out", str(out),
                    "--estimators", "ls", "--snr-db", "5", "--num-samples", "150",
                ]
            ) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_pn_sweep(self, tiny_config, tmp_path):
        out = tmp_path / "pn.csv"
        rc = main(
            [
                "sweep-pn", "--config", str(tiny_config), "--out", str(out),
                "--estimators", "ls", "--snr-db", "10",
                "--pn-grid", "0", "2e-4", "--num-samples", "150",
            ]
        )
        assert rc == 0
        report = read_report(out)
        assert {r.pn_var_tx for r in report.rows} == {0.0, 2e-4}

    def test_unknown_estimator(self, tiny_config, tmp_path, capsys):
        rc = main(
            [
                "sweep-snr", "--config", str(tiny_config),
                "--out", str(tmp_path / "x.csv"), "--estimators", "omp",
            ]
        )
        assert rc == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"]["type"] == "ConfigurationError"


class TestReport:
    def test_render_pretty(self, tiny_config, tmp_path, capsys):
        csv_path = tmp_path / "snr.csv"
        main(
            [
                "sweep-snr", "--config", str(tiny_config), "--out", str(csv_path),
                "--estimators", "ls", "--snr-db", "0", "--num-samples", "100",
            ]
        )
        capsys.readouterr()
        rc = main(["report", str(csv_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "estimator" in out and "ls" in out
