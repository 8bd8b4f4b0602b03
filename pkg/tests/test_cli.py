import csv
import json

import pytest

from gsp_mzi import loss
from gsp_mzi.cli import main
from gsp_mzi.sweeps import CSV_HEADER
from gsp_mzi.validate import run_validation


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestMetricCommand:
    def test_unoperated_fisher_information(self, capsys):
        code, out, _ = run_cli(capsys, "metric", "qfi", "--family", "tmsv", "--z", "0.6")
        assert code == 0
        assert out.strip() == "3.51562500000 closed_form"

    def test_gsp_photon_number(self, capsys):
        code, out, _ = run_cli(
            capsys, "metric", "apn", "--family", "gsp", "--s", "0", "--m", "1", "--n", "0", "--z", "0.5"
        )
        assert code == 0
        assert out.strip() == "2.20000000000 closed_form"

    def test_out_of_range_z_is_invalid_input(self, capsys):
        code, _, err = run_cli(capsys, "metric", "qfi", "--family", "tmsv", "--z", "1.2")
        assert code == 2
        assert "z" in err

    def test_unknown_metric_is_invalid_input(self, capsys):
        code, _, _ = run_cli(capsys, "metric", "shininess", "--family", "tmsv", "--z", "0.5")
        assert code == 2

    def test_loss_metric_needs_exactly_one_eta(self, capsys):
        base = ["metric", "parity_loss", "--family", "tmsv", "--z", "0.6", "--phi", "0.1"]
        assert run_cli(capsys, *base)[0] == 2
        assert run_cli(capsys, *base, "--eta1", "0.9", "--eta2", "0.9")[0] == 2
        code, out, _ = run_cli(capsys, *base, "--eta2", "0.9")
        assert code == 0 and out.endswith("closed_form\n")

    def test_oracle_engine(self, capsys):
        code, out, _ = run_cli(capsys, "metric", "apn", "--family", "ps-tmsv", "--z", "0.6")
        assert code == 0
        assert out.strip().endswith("fock_oracle")

    def test_phase_metric_needs_phi(self, capsys):
        code, _, _ = run_cli(capsys, "metric", "parity", "--family", "tmsv", "--z", "0.6")
        assert code == 2


@pytest.fixture
def both_engine_config(tmp_path):
    cfg = {
        "states": [{"family": "tmsv"}, {"family": "gsp", "s": 0.0, "m": 1, "n": 1}],
        "z": {"from": 0.1, "to": 0.9, "steps": 9},
        "metrics": ["apn"],
        "engine": "both",
        "output": str(tmp_path / "sweep.csv"),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path, tmp_path / "sweep.csv"


class TestSweepCommand:
    def test_flag_driven_sweep(self, capsys, tmp_path):
        out_path = tmp_path / "z.csv"
        code, _, _ = run_cli(
            capsys, "sweep", "--family", "tmsv",
            "--z-from", "0.1", "--z-to", "0.9", "--z-steps", "9",
            "--metrics", "apn", "--output", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 9

    def test_two_families_both_engines(self, capsys, both_engine_config):
        cfg_path, out_path = both_engine_config
        code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg_path))
        assert code == 0
        rows = list(csv.DictReader(out_path.open()))
        assert len(rows) == 36
        by_point = {}
        for row in rows:
            key = (row["family"], row["s"], row["z"])
            by_point.setdefault(key, {})[row["engine"]] = float(row["value"])
        assert len(by_point) == 18
        for values in by_point.values():
            gap = abs(values["closed_form"] - values["fock_oracle"])
            assert gap < 1e-9 * max(abs(values["closed_form"]), 1.0)

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        code, _, err = run_cli(capsys, "sweep", "--config", str(bad))
        assert code == 2 and "config" in err

    def test_rows_sorted_lexicographically(self, capsys, both_engine_config):
        cfg_path, out_path = both_engine_config
        run_cli(capsys, "sweep", "--config", str(cfg_path))
        rows = list(csv.reader(out_path.open()))[1:]
        keys = [row[:9] + [row[10]] for row in rows]  # parameter columns, then engine
        assert keys == sorted(keys)

    def test_byte_identical_across_runs_and_thread_counts(
        self, capsys, both_engine_config, monkeypatch
    ):
        cfg_path, out_path = both_engine_config
        run_cli(capsys, "sweep", "--config", str(cfg_path))
        first = out_path.read_bytes()
        run_cli(capsys, "sweep", "--config", str(cfg_path))
        assert out_path.read_bytes() == first
        monkeypatch.setenv("GSP_THREADS", "1")
        run_cli(capsys, "sweep", "--config", str(cfg_path))
        assert out_path.read_bytes() == first


class TestFigureCommand:
    def test_unknown_name(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "figure", "fig13", "--outdir", str(tmp_path))
        assert code == 2

    def test_fig2_panels(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "figure", "fig2", "--outdir", str(tmp_path))
        assert code == 0
        for panel in ("fig2a", "fig2b"):
            path = tmp_path / f"{panel}.csv"
            assert path.exists() and str(path) in out
            lines = path.read_text().splitlines()
            assert lines[0] == CSV_HEADER
            # 3 s values x 2 (m,n) pairs + the un-operated baseline, 18 z points
            assert len(lines) == 1 + 7 * 18


class TestValidateCommand:
    def test_small_grid_passes(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--grid", "small")
        assert code == 0
        assert "VALIDATION PASSED" in out
        assert "cross-engine parity" in out

    def test_detects_injected_coefficient_bug(self, monkeypatch):
        # flipping the sign of the cross-coupling magnitude must be caught
        # by the harness and blamed on the internal-loss parity
        real = loss._cross_coupling_sq
        monkeypatch.setattr(loss, "_cross_coupling_sq", lambda eta, sin2: -real(eta, sin2))
        report = run_validation("small")
        assert not report.passed
        failing = [c.name for c in report.checks if not c.passed]
        assert any("parity_loss" in name for name in failing)
        offender = next(c for c in report.checks if not c.passed and "parity_loss" in c.name)
        assert "internal" in offender.worst_point
