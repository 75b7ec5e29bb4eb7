import json
import math

import numpy as np
import pytest

from cdpulse.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


class TestDesign:
    def test_pulse_file_and_boundary(self, tmp_path):
        code = main(
            [
                "design",
                "--protocol",
                "single-I",
                "--nu",
                "0.70710678",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        header, data = read_csv(tmp_path / "pulses.csv")
        assert header == ["t", "omega_p", "omega_s", "omega_a"]
        assert data.shape == (4001, 4)
        # endpoint nulls and the closed-form midpoint peak
        assert data[0, 3] == 0.0
        assert abs(data[-1, 3]) <= 1e-12
        mid = data[2000]
        assert abs(mid[3]) == pytest.approx(1.5 * math.pi / 4.0, abs=1e-6)
        boundary = json.loads((tmp_path / "design.json").read_text())
        assert boundary["protocol"] == "single-I"
        assert boundary["theta_f"] == pytest.approx(math.pi / 4.0)

    def test_json_format(self, tmp_path):
        code = main(
            [
                "design",
                "--protocol",
                "multi",
                "--mu",
                "0.5773502692",
                "--eta",
                "0.5773502692",
                "--format",
                "json",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        payload = json.loads((tmp_path / "pulses.json").read_text())
        assert payload["header"] == ["t", "omega_p", "omega_s", "omega_a"]
        assert len(payload["rows"]) == 4001

    def test_deterministic_output(self, tmp_path):
        argv = [
            "design",
            "--protocol",
            "single-II",
            "--mu",
            "0.5773502692",
            "--eta",
            "0.5773502692",
        ]
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["--out", str(a)]) == EXIT_OK
        assert main(argv + ["--out", str(b)]) == EXIT_OK
        assert (a / "pulses.csv").read_bytes() == (b / "pulses.csv").read_bytes()


class TestEvolve:
    def test_summary_and_trajectory(self, tmp_path):
        code = main(
            [
                "evolve",
                "--protocol",
                "single-II-nomw",
                "--mu",
                "0.40824829",
                "--eta",
                "0.57735027",
                "--initial",
                "2",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        summary = json.loads((tmp_path / "summary.json").read_text())
        expected = [1.0 / 6.0, 1.0 / 3.0, 0.5]
        assert np.allclose(summary["final_populations"], expected, atol=1e-6)
        assert summary["final_fidelity"] >= 1.0 - 1e-6
        assert summary["max_norm_drift"] <= 1e-8
        header, data = read_csv(tmp_path / "trajectory.csv")
        assert header[:4] == ["t", "P1", "P2", "P3"]
        assert "norm" in header
        assert data.shape[0] == 4001

    def test_phased_extra_columns(self, tmp_path):
        code = main(
            [
                "evolve",
                "--protocol",
                "phased",
                "--mu",
                "0.70710678",
                "--initial",
                "3",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        header, data = read_csv(tmp_path / "trajectory.csv")
        for col in ("theta_prime", "kappa_prime", "bloch_x", "bloch_y", "bloch_z"):
            assert col in header
        bloch = data[:, [header.index(c) for c in ("bloch_x", "bloch_y", "bloch_z")]]
        assert np.max(np.abs(np.linalg.norm(bloch, axis=1) - 1.0)) <= 1e-10

    def test_preset(self, tmp_path):
        code = main(["evolve", "--preset", "beamsplit12", "--out", str(tmp_path)])
        assert code == EXIT_OK
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert np.allclose(summary["final_populations"], [0.5, 0.0, 0.5], atol=1e-6)


class TestSweepAndMetrics:
    def test_sweep(self, tmp_path):
        code = main(
            ["sweep", "--resolution", "12", "--out", str(tmp_path)]
        )
        assert code == EXIT_OK
        header, data = read_csv(tmp_path / "ratio_surface.csv")
        assert header == ["mu", "eta", "omega_ratio", "energy_ratio"]
        assert data.shape == (144, 4)
        assert np.all(data[:, 2] < 1.0)
        assert np.max(np.abs(data[:, 3] - data[:, 2] ** 2)) <= 1e-10

    def test_metrics(self, tmp_path, capsys):
        code = main(
            [
                "metrics",
                "--protocol",
                "multi",
                "--mu",
                "0.5773502692",
                "--eta",
                "0.5773502692",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
        payload = json.loads((tmp_path / "metrics.json").read_text())
        printed = json.loads(capsys.readouterr().out)
        assert printed == payload
        assert payload["omega_bar"] > 0.0
        assert payload["energy_ratio"] == pytest.approx(
            payload["omega_ratio"] ** 2, abs=1e-10
        )


class TestFigures:
    @pytest.mark.parametrize(
        "figure,expected",
        [
            (1, ["fig1a_pulses.csv", "fig1b_populations.csv"]),
            (3, ["fig3a_fidelities.csv", "fig3d_fidelities.csv"]),
            (10, ["fig10_ratio_surface.csv"]),
            (13, ["fig13_populations.csv"]),
        ],
    )
    def test_figure_files(self, tmp_path, figure, expected):
        argv = ["figures", str(figure), "--out", str(tmp_path), "--steps", "400"]
        if figure == 10:
            argv += ["--resolution", "12"]
        assert main(argv) == EXIT_OK
        for name in expected:
            assert (tmp_path / name).exists()

    def test_unknown_figure(self, tmp_path):
        assert main(["figures", "14", "--out", str(tmp_path)]) == EXIT_USAGE


class TestConfigAndErrors:
    def test_config_file_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# even split\nprotocol = single-I\nnu = 0.70710678\nsteps = 500\n"
        )
        out = tmp_path / "out"
        code = main(["design", "--config", str(cfg), "--out", str(out)])
        assert code == EXIT_OK
        _, data = read_csv(out / "pulses.csv")
        assert data.shape == (501, 4)

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("protocol = single-I\nnu = 0.70710678\nsteps = 500\n")
        out = tmp_path / "out"
        code = main(
            ["design", f"--config={cfg}", "--steps", "300", "--out", str(out)]
        )
        assert code == EXIT_OK
        _, data = read_csv(out / "pulses.csv")
        assert data.shape == (301, 4)

    def test_bad_config_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("protocol single-I\n")
        assert main(["design", "--config", str(cfg)]) == EXIT_USAGE

    def test_missing_protocol(self):
        assert main(["design"]) == EXIT_USAGE

    def test_unnormalized_target(self, tmp_path):
        code = main(
            [
                "design",
                "--protocol",
                "single-I",
                "--mu",
                "0.9",
                "--nu",
                "0.9",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_VALIDATION

    def test_unknown_flag(self):
        assert main(["design", "--protocol", "single-I", "--bogus"]) == EXIT_USAGE

    def test_too_few_steps(self, tmp_path):
        code = main(
            [
                "evolve",
                "--protocol",
                "single-I",
                "--nu",
                "1.0",
                "--steps",
                "50",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_VALIDATION

    def test_near_unit_target_renormalized(self, tmp_path):
        # 4-digit amplitudes: slight norm error is quietly rescaled
        code = main(
            [
                "design",
                "--protocol",
                "single-II",
                "--mu",
                "0.5774",
                "--eta",
                "0.5774",
                "--nu",
                "0.5774",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_OK
