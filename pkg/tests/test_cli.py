"""
End-to-end tests of the ringlight command line.
"""

import io

import numpy as np
import orjson
import pandas as pd
import pytest

from ringlight.cli.main import main
from ringlight.core.exceptions import IntegrationError

RECTANGULAR_RUN = """
[modulation]
kind = rectangular
f_r = 2
period = 1

[bath]
gamma = 0.05
nbar = 1

[run]
n_periods = 3
samples_per_period = 4
"""

FLAT_RUN = """
[modulation]
kind = sinusoidal
f0 = 3.141592653589793
h = 0
period = 1

[bath]
gamma = 0.1
nbar = 0.5

[run]
n_periods = 2
samples_per_period = 5
"""


@pytest.fixture
def config_file(tmp_path):
    def write(text):
        path = tmp_path / "run.ini"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def _csv(text):
    return pd.read_csv(io.StringIO(text))


class TestSimulate:
    def test_csv_with_closed_forms(self, config_file, capsys):
        assert main(["simulate", "--config", config_file(RECTANGULAR_RUN)]) == 0
        frame = _csv(capsys.readouterr().out)
        assert list(frame.columns) == ["t", "N_total", "E_N", "E_max", "purity",
                                       "E_N_over_E_max", "N_closed", "EN_closed"]
        assert len(frame) == 13
        strobe = frame[frame["t"] % 1.0 == 0.0]
        assert len(strobe) == 4
        np.testing.assert_allclose(strobe["N_closed"], strobe["N_total"], rtol=1e-6)
        np.testing.assert_allclose(strobe["EN_closed"], strobe["E_N"], atol=1e-6)
        between = frame[frame["t"] % 1.0 != 0.0]
        assert between["N_closed"].isna().all()

    def test_byte_identical_reruns(self, config_file, tmp_path):
        path = config_file(RECTANGULAR_RUN)
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", "--config", path, "--out", str(first)]) == 0
        assert main(["simulate", "--config", path, "--out", str(second), "--threads", "4"]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert b"\r\n" not in first.read_bytes()

    def test_unmodulated_thermal_run_is_flat(self, config_file, capsys):
        assert main(["simulate", "--config", config_file(FLAT_RUN)]) == 0
        frame = _csv(capsys.readouterr().out)
        np.testing.assert_allclose(frame["N_total"], 1.0, rtol=1e-9)
        assert (frame["E_N"] == 0.0).all()
        assert frame["N_closed"].isna().all()

    def test_propagator_method_agrees(self, config_file, tmp_path):
        path = config_file(RECTANGULAR_RUN)
        moments, solved = tmp_path / "m.csv", tmp_path / "p.csv"
        assert main(["simulate", "--config", path, "--out", str(moments)]) == 0
        assert main(["simulate", "--config", path, "--out", str(solved),
                     "--method", "propagator"]) == 0
        a, b = pd.read_csv(moments), pd.read_csv(solved)
        np.testing.assert_allclose(a["N_total"], b["N_total"], rtol=1e-6)

    def test_json_report(self, config_file, capsys):
        assert main(["simulate", "--config", config_file(RECTANGULAR_RUN),
                     "--format", "json", "--n-periods", "1"]) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["schema_version"] == 1
        assert report["kind"] == "simulate"
        assert report["columns"][0] == "t"
        assert len(report["rows"]) == 5
        assert report["rows"][1][6] is None
        assert report["parameters"]["nu"] == pytest.approx(np.log(2.0))

    def test_flag_overrides(self, config_file, capsys):
        assert main(["simulate", "--config", config_file(RECTANGULAR_RUN),
                     "--gamma", "0", "--nbar", "0", "--samples-per-period", "1"]) == 0
        frame = _csv(capsys.readouterr().out)
        assert len(frame) == 4
        np.testing.assert_allclose(frame["N_total"] + 1, np.cosh(2 * np.log(2.0) * frame["t"]),
                                   rtol=1e-8)

    def test_config_error_exit_code(self, config_file, capsys):
        path = config_file(FLAT_RUN.replace("h = 0", "h = 1.5"))
        assert main(["simulate", "--config", path]) == 2
        assert "ringlight simulate:" in capsys.readouterr().err

    def test_missing_config(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "nope.ini")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_numerical_error_exit_code(self, mocker, config_file, capsys):
        mocker.patch("ringlight.cli.main.simulation_table",
                     side_effect=IntegrationError("step size underflow", last_good_time=1.0))
        assert main(["simulate", "--config", config_file(RECTANGULAR_RUN)]) == 3
        assert "step size underflow" in capsys.readouterr().err


class TestChart:
    ARGS = ["chart", "--family", "sinusoidal", "--axis1", "0.99, 1.01, 3",
            "--axis2", "0, 0.01, 2"]

    def test_csv(self, capsys):
        assert main(self.ARGS) == 0
        frame = _csv(capsys.readouterr().out)
        assert list(frame.columns) == ["axis1", "axis2", "re_nu"]
        assert len(frame) == 6
        assert (frame[frame["axis2"] == 0.0]["re_nu"] == 0.0).all()
        center = frame[np.isclose(frame["axis1"], 1.0) & (frame["axis2"] == 0.01)]["re_nu"]
        assert center.iloc[0] == pytest.approx(np.pi / 400, rel=0.05)

    def test_threads_do_not_change_output(self, tmp_path):
        one, many = tmp_path / "one.csv", tmp_path / "many.csv"
        assert main(self.ARGS + ["--threads", "1", "--out", str(one)]) == 0
        assert main(self.ARGS + ["--threads", "4", "--out", str(many)]) == 0
        assert one.read_bytes() == many.read_bytes()

    def test_rectangular(self, capsys):
        assert main(["chart", "--family", "rectangular", "--axis1", "2, 4, 2",
                     "--axis2", "1.5707963267948966, 1.5707963267948966, 1"]) == 0
        frame = _csv(capsys.readouterr().out)
        np.testing.assert_allclose(frame["re_nu"], np.log([2.0, 4.0]), rtol=1e-9)

    @pytest.mark.parametrize("axis1", ["1, 1, 3", "1", "a, b"])
    def test_bad_ranges(self, axis1, capsys):
        assert main(["chart", "--axis1", axis1, "--axis2", "0, 0.01, 2"]) == 2

    def test_negative_threads(self, capsys):
        assert main(self.ARGS + ["--threads", "-1"]) == 2


class TestOptimize:
    FIXED = ["--fix", "f1=2.356194490192345", "--fix", "f_r=2", "--fix", "period=1"]

    def test_rectangular(self, capsys):
        assert main(["optimize", "--family", "rectangular", "--bound", "t1=0.4,0.9",
                     "--budget", "200"] + self.FIXED) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["schema_version"] == 1
        assert report["family"] == "rectangular"
        assert report["best_params"]["t1"] == pytest.approx(2.0 / 3.0, abs=1e-4)
        assert report["nu"] == pytest.approx(np.log(2.0), abs=1e-4)
        assert report["evaluations"] <= 200

    def test_single_point_bounds(self, capsys):
        assert main(["optimize", "--family", "rectangular", "--bound", "t1=0.5,0.5"]
                    + self.FIXED) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["best_params"]["t1"] == 0.5
        assert report["evaluations"] == 1

    @pytest.mark.parametrize("extra", [
        ["--bound", "t1=0.9,0.4"],
        ["--bound", "t1=0.4"],
        ["--bound", "t1"],
        ["--bound", "t1=0.4,0.9", "--budget", "3"],
    ])
    def test_invalid(self, extra, capsys):
        assert main(["optimize", "--family", "rectangular"] + extra + self.FIXED) == 2


class TestFigures:
    def test_writes_data_and_sidecar(self, tmp_path):
        assert main(["figures", "entanglement_ratio", "--out", str(tmp_path)]) == 0
        frame = pd.read_csv(tmp_path / "entanglement_ratio.csv")
        sidecar = orjson.loads((tmp_path / "entanglement_ratio.meta.json").read_bytes())
        assert sidecar["figure"] == "entanglement_ratio"
        assert sidecar["data_file"] == "entanglement_ratio.csv"
        assert sidecar["columns"] == list(frame.columns)
        assert sidecar["schema_version"] == 1
        final = frame.groupby("gamma")["ratio"].last()
        assert final[0.0] >= 0.97

    def test_json_format(self, tmp_path):
        assert main(["figures", "photon_yield", "--out", str(tmp_path), "--format", "json"]) == 0
        report = orjson.loads((tmp_path / "photon_yield.json").read_bytes())
        assert report["columns"] == ["gamma", "t", "n_plus_one_normalized"]
        assert (tmp_path / "photon_yield.meta.json").exists()

    def test_numbered_alias(self, tmp_path):
        assert main(["figures", "fig4", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "entanglement_ratio.csv").exists()
        assert (tmp_path / "entanglement_ratio.meta.json").exists()


def test_version(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert "ringlight" in capsys.readouterr().out
