import json
import os
import subprocess
import sys

import pytest

from qmlscale.cli import (CSV_COLUMNS, ConfigError, ExperimentConfig,
                          load_config, parse_config_text, run,
                          validate_config)

TINY = """
# tiny sweep for tests
families = ghz,kernel-pairwise
topologies = linear,ring
qubits = 4,6
ttn_qubits = 4,8
fidelity_qubits = 4,6
ttn_fidelity_qubits = 4,8
deltas = 1,10
fixed_n = 6
workers = 1
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY)
    return str(path)


class TestConfigParsing:
    def test_defaults_are_reference_setup(self):
        cfg = ExperimentConfig()
        assert cfg.p1 == pytest.approx(7.42e-5)
        assert cfg.p2 == pytest.approx(7e-4)
        assert cfg.t1q_ns == pytest.approx(7.9)
        assert cfg.t2q_ns == pytest.approx(30.0)
        assert cfg.T1_us == pytest.approx(1200.0)
        assert cfg.T2_us == pytest.approx(1160.0)
        assert cfg.qubits == tuple(range(100, 1001, 100))
        assert cfg.ttn_qubits == (8, 16, 32, 64, 128, 256, 512, 1024)
        assert cfg.fidelity_qubits == tuple(range(10, 101, 10))
        assert cfg.ttn_fidelity_qubits == (4, 8, 16, 32, 64)
        assert cfg.fixed_n == 256
        validate_config(cfg)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("familiez = ghz\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("seed = 1\nseed = 2\n")

    def test_range_expansion(self, tmp_path):
        path = tmp_path / "r.cfg"
        path.write_text("qubits = 100..400..100,1000\n")
        cfg = load_config(str(path))
        assert cfg.qubits == (100, 200, 300, 400, 1000)

    def test_ttn_power_of_two_enforced(self, tmp_path):
        path = tmp_path / "t.cfg"
        path.write_text("ttn_qubits = 4,6\n")
        with pytest.raises(ConfigError):
            validate_config(load_config(str(path)))

    def test_comments_and_blanks(self):
        entries = parse_config_text("# hi\n\nseed = 3  # tail\n")
        assert entries == {"seed": "3"}

    def test_bad_value(self, tmp_path):
        path = tmp_path / "b.cfg"
        path.write_text("seed = banana\n")
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestRunSweeps:
    def test_resources_csv(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        code = run(["resources", "--config", tiny_config, "--out", str(out)])
        assert code == 0
        csv_path = out / "resources.csv"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 2 * 2 * 2
        # ghz on ring: zero swaps, fidelity columns empty
        row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
        assert row["circuit_family"] == "ghz"
        assert row["entanglement"] == ""
        assert row["swap_count"] == "0"
        assert row["total_fidelity"] == ""
        assert row["improvement_factor"] == ""
        manifest = json.loads((out / "resources_manifest.json").read_text())
        assert manifest["version"]
        assert manifest["config"]["families"] == ["ghz", "kernel-pairwise"]

    def test_byte_identical_reruns(self, tiny_config, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run(["resources", "--config", tiny_config, "--out", str(out1)]) == 0
        assert run(["resources", "--config", tiny_config, "--out", str(out2)]) == 0
        assert (out1 / "resources.csv").read_bytes() == (out2 / "resources.csv").read_bytes()

    def test_fidelity_rows(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert run(["fidelity", "--config", tiny_config, "--out", str(out)]) == 0
        lines = (out / "fidelity.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 * 2 * 2 * 2
        row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
        assert row["improvement_factor"] == "1"
        assert 0.0 < float(row["total_fidelity"]) <= 1.0

    def test_tech_gap_rows(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert run(["tech-gap", "--config", tiny_config, "--out", str(out)]) == 0
        lines = (out / "tech_gap.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 * 2 * 2
        row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
        assert row["n_qubits"] == "6"
        assert row["extrapolated"] in ("true", "false", "")
        assert row["swap_count"] == ""

    def test_json_format(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert run(["resources", "--config", tiny_config, "--out", str(out),
                    "--format", "json"]) == 0
        rows = json.loads((out / "resources.json").read_text())
        assert len(rows) == 8
        assert set(rows[0]) == set(CSV_COLUMNS)
        assert rows[0]["total_fidelity"] is None

    def test_override_flags(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert run(["resources", "--config", tiny_config, "--out", str(out),
                    "--family", "ghz", "--topology", "linear", "--n", "4"]) == 0
        lines = (out / "resources.csv").read_text().splitlines()
        assert len(lines) == 2

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense_key = 1\n")
        assert run(["resources", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2

    def test_invalid_family_flag(self, tiny_config, tmp_path):
        assert run(["resources", "--config", tiny_config,
                    "--out", str(tmp_path / "o"), "--family", "warp"]) == 2

    def test_no_partial_files_on_error(self, tiny_config, tmp_path):
        out = tmp_path / "collide"
        out.write_text("")  # file where the out dir should be -> runtime error
        code = run(["resources", "--config", tiny_config, "--out", str(out)])
        assert code == 3
        assert not (tmp_path / "collide.csv").exists()


class TestCompileOne:
    def test_ghz_header(self, capsys):
        assert run(["compile-one", "ghz", "--n", "4", "--topology", "linear"]) == 0
        outp = capsys.readouterr().out.splitlines()
        assert outp[0] == "# swaps=0, depth_pre=4, depth_post=4, twoq_pre=3, twoq_post=3"
        assert outp[1].startswith("U3 0 ")
        assert outp[2] == "CX 0,1"

    def test_manifest_when_out_given(self, tmp_path, capsys):
        out = tmp_path / "m"
        assert run(["compile-one", "ttn", "--n", "8", "--topology", "grid",
                    "--out", str(out)]) == 0
        assert (out / "compile_one_manifest.json").exists()

    def test_unknown_family_rejected(self, capsys):
        with pytest.raises(SystemExit):
            run(["compile-one", "warp"])


class TestSelftest:
    def test_passes(self, capsys):
        assert run(["selftest", "--seed", "5"]) == 0
        assert "checks passed" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmlscale.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "qmlscale" in proc.stdout
