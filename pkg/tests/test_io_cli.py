import json
import math

import jsonschema
import numpy as np
import pytest

from layerscatter import io as lsio
from layerscatter.cli import main
from layerscatter.errors import ConfigError
from layerscatter.media import ImpedanceProfile, StepMedium


def _run(tmp_path, *argv):
    out, rep = tmp_path / "out.csv", tmp_path / "report.json"
    code = main([*argv, "--out", str(out), "--report", str(rep)])
    report = json.loads(rep.read_text()) if rep.exists() else None
    return code, out, report


class TestCsv:
    def test_round_trip_keeps_full_precision(self, tmp_path):
        x = np.array([0.1, 1 / 3, 2.0 ** -40])
        path = tmp_path / "p.csv"
        lsio.write_csv(path, [x, np.exp(x)], lsio.CSV_HEADERS["profile"])
        got = lsio.read_csv(path, lsio.CSV_HEADERS["profile"])
        np.testing.assert_array_equal(got[0], x)
        np.testing.assert_array_equal(got[1], np.exp(x))
        assert b"\r" not in path.read_bytes()

    def test_header_checked(self, tmp_path):
        path = tmp_path / "p.csv"
        lsio.write_csv(path, [[1.0], [2.0]], ("a", "b"))
        with pytest.raises(ConfigError):
            lsio.read_csv(path, ("t", "d"))

    def test_column_validation(self):
        with pytest.raises(ConfigError):
            lsio.csv_text([[1.0], [1.0, 2.0]], ("a", "b"))
        with pytest.raises(ConfigError):
            lsio.csv_text([[1.0]], ("a", "b"))


class TestDescriptors:
    def test_named_profiles(self):
        assert lsio.parse_profile("const:2").zeta(0.5) == 2.0
        assert lsio.parse_profile("exp:0.1").alpha(np.array([0.3]))[0] == pytest.approx(0.1)
        p = lsio.parse_profile("chirp")
        assert p.interval.x1 == 30.0 and p.breaks == (5.0, 15.0)
        assert lsio.parse_profile("paper53").kind == "chirp"
        assert lsio.parse_profile("chirp:5,15,0.01,0.3", 0, 20).params["c"] == 0.01

    def test_bad_descriptors(self):
        for desc in ("", "exp", "chirp:1,2", "nosuchthing", "exp:x"):
            with pytest.raises(ConfigError):
                lsio.parse_profile(desc)

    def test_json_step(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"kind": "step", "x0": 0, "x1": 3, "jumps": [1, 2],
                                    "reflectivities": [0.3, -0.4]}))
        m = lsio.parse_profile(str(path))
        assert isinstance(m, StepMedium)
        np.testing.assert_allclose(m.reflectivities, [0.3, -0.4])

    def test_csv_samples(self, tmp_path):
        path = tmp_path / "z.csv"
        x = np.linspace(0, 1, 11)
        lsio.write_csv(path, [x, 1 + x], lsio.CSV_HEADERS["profile"])
        p = lsio.parse_profile(str(path))
        assert isinstance(p, ImpedanceProfile)
        assert p.zeta(1.0) == pytest.approx(2.0)


class TestReports:
    def test_schema_and_hash(self):
        rep = lsio.make_report("x", {"b": 1, "a": np.float64(2.0)}, {"v": np.arange(2)},
                               wall_time=0.1, identity=(1.0, 1.5))
        jsonschema.validate(rep, lsio.REPORT_SCHEMA)
        assert rep["identity"]["gap"] == 0.5
        assert rep["config_hash"] == lsio.config_hash({"a": 2.0, "b": 1})

    def test_non_finite_values_survive(self):
        rep = lsio.make_report("x", {}, {"v": math.inf})
        assert json.loads(json.dumps(rep))["results"]["v"] == "inf"


class TestCli:
    def test_forward_constant_profile_is_silent(self, tmp_path):
        code, out, rep = _run(tmp_path, "forward", "--profile", "const:2", "--n", "20")
        assert code == 0
        t, d = lsio.read_csv(out, lsio.CSV_HEADERS["data"])
        assert t.size == 20
        np.testing.assert_array_equal(d, 0.0)
        jsonschema.validate(rep, lsio.REPORT_SCHEMA)

    def test_output_is_byte_identical_across_runs(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            assert main(["forward", "--n", "200", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_forward_then_invert(self, tmp_path):
        data = tmp_path / "d.csv"
        assert main(["forward", "--profile", "exp:0.3", "--n", "300", "--out", str(data)]) == 0
        code, out, rep = _run(tmp_path, "invert", "--data", str(data), "--truth", "exp:0.3")
        assert code == 0
        # zeta0 = 1 is the value at x0, half a layer before the first sample
        assert rep["results"]["relative_l2_error"] < 2e-3
        assert rep["results"]["truncated_at"] is None

    def test_inconsistent_data_exit_code(self, tmp_path):
        data = tmp_path / "d.csv"
        lsio.write_csv(data, [[1.0, 2.0, 3.0], [0.5, 0.9, 0.0]], lsio.CSV_HEADERS["data"])
        assert main(["invert", "--data", str(data), "--out", str(tmp_path / "o.csv")]) == 4
        code, _, rep = _run(tmp_path, "invert", "--data", str(data), "--lenient")
        assert code == 0 and rep["results"]["truncated_at"] == 2

    def test_config_error_exit_code(self, tmp_path):
        assert main(["forward", "--profile", "bogus", "--out", str(tmp_path / "o")]) == 2
        with pytest.raises(SystemExit) as info:
            main(["forward", "--n", "0"])
        assert info.value.code == 2

    def test_szego(self, tmp_path):
        code, out, rep = _run(tmp_path, "szego", "--r", "0.5")
        assert code == 0
        assert rep["identity"]["rhs"] == pytest.approx(-math.log(0.75))
        assert rep["identity"]["gap"] < 1e-9

    def test_trace_of_constant_profile(self, tmp_path):
        code, _, rep = _run(tmp_path, "trace", "--profile", "const", "--n", "10",
                            "--count", "101")
        assert code == 0
        assert rep["identity"]["lhs"] == 0.0 and rep["identity"]["rhs"] == 0.0

    def test_trace_of_step_medium(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"kind": "step", "x1": 3, "jumps": [1.0, 2.3],
                                    "reflectivities": [0.3, -0.4]}))
        code, _, rep = _run(tmp_path, "trace", "--profile", str(path), "--band", "300",
                            "--count", "60001")
        assert code == 0 and rep["results"]["kind"] == "singular"
        assert rep["identity"]["lhs"] == pytest.approx(rep["identity"]["rhs"], rel=0.05)

    def test_layerstrip(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"kind": "step", "x1": 3, "jumps": [0.7, 1.2, 2.1],
                                    "values": [1.0, 2.0, 1.5, 3.0]}))
        code, _, rep = _run(tmp_path, "layerstrip", "--profile", str(path))
        assert code == 0 and rep["results"]["complete"]
        assert rep["results"]["max_reflectivity_error"] < 1e-12

    def test_shortrange(self, tmp_path):
        code, out, rep = _run(tmp_path, "shortrange", "--profile", "exp:0.05", "--n", "400",
                              "--y", "0.25,0.5")
        assert code == 0
        assert rep["results"]["max_relative_gap"] < 1e-3

    def test_spectrum_thread_count_does_not_change_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["spectrum", "--n", "300", "--count", "64"]
        assert main([*base, "--out", str(a), "--threads", "1"]) == 0
        assert main([*base, "--out", str(b), "--threads", "3"]) == 0
        assert a.read_bytes() == b.read_bytes()
