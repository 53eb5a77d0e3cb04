"""Command-line entry points, exit codes, and JSON reports."""

import json

import pytest

from dualcr.cli import main
from dualcr.config import Settings, load_config, settings_from_dict
from dualcr.errors import ConfigError

ELL = "hermitian:[[1,0],[0,2]]"


class TestExitCodes:
    def test_validate_surface(self, capsys):
        assert main(["validate-surface", "--surface", ELL]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["checks"][0]["verdict"] is True

    def test_frames(self, capsys):
        assert main(["frames", "--surface", ELL, "--points", "3"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert all(c["verdict"] for c in data["checks"])

    def test_check_member_passes(self, capsys):
        code = main(["check", "--surface", ELL, "--expr", "z1^2 + w1*w2",
                     "--points", "10"])
        assert code == 0
        capsys.readouterr()

    def test_check_counterexample_fails(self, capsys):
        code = main(["check", "--surface", ELL, "--expr", "z1/w2",
                     "--mode", "local", "--points", "10"])
        assert code == 1
        data = json.loads(capsys.readouterr().out)
        rec = data["checks"][0]
        assert rec["verdict"] is False
        assert rec["max_residual"] == pytest.approx(2.0, abs=1e-6)

    def test_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            main(["check", "--surface", ELL])  # missing --expr
        assert ei.value.code == 2

    def test_unknown_surface_is_runtime_error(self, capsys):
        assert main(["frames", "--surface", "banana"]) == 1


class TestCommands:
    def test_apply(self, capsys):
        code = main(["apply", "--surface", ELL, "--expr", "z1*w1 + z2*w2",
                     "--word", "X", "--points", "3"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["checks"][0]["max_residual"] < 1e-9

    def test_pairing_vanishing_pair(self, capsys):
        code = main(["pairing", "--surface", ELL, "--expr", "z1*z2",
                     "--expr2", "w1^2", "--grid", "16"])
        assert code == 0
        capsys.readouterr()

    def test_integrate_sphere_area(self, capsys):
        import numpy as np
        assert main(["integrate", "--expr", "1", "--grid", "16"]) == 0
        data = json.loads(capsys.readouterr().out)
        val = data["checks"][0]["detail"]["value"]
        assert val["re"] == pytest.approx(2 * np.pi**2, abs=1e-6)

    def test_decompose(self, capsys):
        code = main(["decompose", "--surface", ELL,
                     "--expr", "z1*z2 + w2^2", "--targets", "3",
                     "--tol", "1e-6"])
        assert code == 0
        capsys.readouterr()

    def test_nirenberg_constant(self, capsys):
        assert main(["nirenberg", "--jet", "1,0,0,0,0,0,0,0,0,0"]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_nirenberg_wrong_arity(self, capsys):
        assert main(["nirenberg", "--jet", "1,2,3"]) == 2
        capsys.readouterr()

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["validate-surface", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["command"] == "validate-surface"
        assert capsys.readouterr().out == ""


class TestConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("")
        assert load_config(p) == Settings()

    def test_override(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"jet_order": 6, "delta_sing": 0.2}))
        s = load_config(p)
        assert s.jet_order == 6 and s.delta_sing == 0.2

    def test_unknown_field(self):
        with pytest.raises(ConfigError):
            settings_from_dict({"toll": 1e-8})

    def test_bad_type(self):
        with pytest.raises(ConfigError):
            settings_from_dict({"jet_order": 5.5})

    def test_cli_config(self, tmp_path, capsys):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"seed": 7}))
        assert main(["frames", "--config", str(p), "--points", "2"]) == 0
        capsys.readouterr()
