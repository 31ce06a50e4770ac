"""Command-line behavior: exit codes, determinism, output layout."""

import re
from pathlib import Path

import numpy as np
import pytest

from qslab.cli import main

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"
TWO_LEVEL = str(SCENARIO_DIR / "two_level.yaml")
SATURATION = str(SCENARIO_DIR / "saturation_arc.yaml")

QUANTUM_DOC = """\
sector: quantum
seed: 3
system:
  matrix:
    - [0, 0]
    - [0, 1]
initial_state:
  type: two_level_plus
time_grid:
  t_max: {t_max}
  samples: {samples}
"""

SWEEP_DOC = """\
sector: hbar_sweep
seed: 5
system:
  polynomial: {q2: 0.5, p2: 0.5}
hbars: [0.4, 0.2]
envelope_sigma_sq: 0.375
position_grid: {x_min: -5.0, x_max: 5.0, n: 256}
classical_grid: {q_min: -5.0, q_max: 5.0, p_min: -5.0, p_max: 5.0, nq: 128, np: 128}
time_grid: {t_max: 1.0, samples: 3}
"""


class TestRunCommand:
    def test_two_level_holds(self, tmp_path, capsys):
        out = tmp_path / "run"
        rc = main(["run", TWO_LEVEL, "--out", str(out)])
        captured = capsys.readouterr().out
        assert rc == 0
        assert "verdict: HOLDS" in captured
        assert (out / "bound_curve.csv").exists()
        assert (out / "summary.txt").exists()
        header = (out / "bound_curve.csv").read_text().splitlines()[0]
        assert header == "time,lhs,rhs,slack"

    def test_curve_values_and_precision(self, tmp_path):
        out = tmp_path / "run"
        assert main(["run", TWO_LEVEL, "--out", str(out)]) == 0
        rows = (out / "bound_curve.csv").read_text().splitlines()[1:]
        assert len(rows) == 101
        last = rows[-1].split(",")
        # closed forms at t = pi: lhs = cos^2(pi/2) = 0, rhs = cos(pi/sqrt 2)
        assert float(last[0]) == pytest.approx(np.pi, abs=1e-12)
        assert float(last[1]) == pytest.approx(0.0, abs=1e-25)
        assert float(last[2]) == pytest.approx(np.cos(np.pi / np.sqrt(2.0)),
                                               abs=1e-12)
        # 12-significant-digit rendering of pi
        assert last[0] == "3.14159265359"

    def test_deterministic_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", TWO_LEVEL, "--out", str(a)]) == 0
        assert main(["run", TWO_LEVEL, "--out", str(b)]) == 0
        assert (a / "bound_curve.csv").read_bytes() == (
            b / "bound_curve.csv"
        ).read_bytes()
        assert (a / "summary.txt").read_bytes() == (b / "summary.txt").read_bytes()

    def test_env_var_overrides_out(self, tmp_path, monkeypatch):
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("QSL_OUT", str(env_dir))
        rc = main(["run", TWO_LEVEL, "--out", str(tmp_path / "ignored")])
        assert rc == 0
        assert (env_dir / "bound_curve.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_multiple_configs_get_subdirectories(self, tmp_path):
        out = tmp_path / "batch"
        rc = main(["run", TWO_LEVEL, SATURATION, "--out", str(out)])
        assert rc == 0
        assert (out / "two_level" / "bound_curve.csv").exists()
        assert (out / "saturation_arc" / "bound_curve.csv").exists()

    def test_parallel_jobs_match_serial(self, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert main(["run", TWO_LEVEL, SATURATION, "--out", str(serial)]) == 0
        assert main(
            ["run", TWO_LEVEL, SATURATION, "--out", str(parallel), "--jobs", "2"]
        ) == 0
        for rel in ("two_level/bound_curve.csv", "saturation_arc/bound_curve.csv"):
            assert (serial / rel).read_bytes() == (parallel / rel).read_bytes()

    def test_duplicate_names_rejected(self, tmp_path, capsys):
        rc = main(["run", TWO_LEVEL, TWO_LEVEL, "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "duplicate" in capsys.readouterr().err

    def test_missing_config_gives_code_two(self, tmp_path, capsys):
        rc = main(["run", str(tmp_path / "nope.yaml"), "--out", str(tmp_path)])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_config_gives_code_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text("sector: nonsense\n")
        rc = main(["run", str(bad), "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "unknown sector" in capsys.readouterr().err

    def test_revival_window_reports_violated(self, tmp_path, capsys):
        # Past the cosine revival the right side returns to +1 while the
        # overlap cannot: the verdict machinery must report it, not mask it.
        cfg = tmp_path / "revival.yaml"
        cfg.write_text(QUANTUM_DOC.format(t_max=2.0 * np.sqrt(2.0) * np.pi,
                                          samples=41))
        out = tmp_path / "rev"
        rc = main(["run", str(cfg), "--out", str(out)])
        assert rc == 1
        assert "verdict: VIOLATED" in capsys.readouterr().out

    def test_domain_error_gives_code_two(self, tmp_path, capsys):
        cfg = tmp_path / "leaky.yaml"
        cfg.write_text(
            "sector: classical\n"
            "system:\n  polynomial: {q2: 0.5, p2: 0.5}\n"
            "initial_state: {type: gaussian, q0: 0.0, p0: 0.0, sigma_q: 1.0, sigma_p: 1.0}\n"
            "grid: {q_min: -6.0, q_max: 6.0, p_min: -6.0, p_max: 6.0, nq: 64, np: 64}\n"
            "time_grid: {t_max: 1.0, samples: 3}\n"
        )
        rc = main(["run", str(cfg), "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "boundary" in capsys.readouterr().err


class TestVerifyCommand:
    def test_full_suite_passes(self, capsys):
        rc = main(["verify"])
        out = capsys.readouterr().out
        assert rc == 0
        m = re.search(r"result: (\d+)/(\d+) passed", out)
        assert m is not None
        assert m.group(1) == m.group(2)
        assert int(m.group(1)) >= 40
        assert "FAIL" not in out

    def test_output_is_deterministic(self, capsys):
        assert main(["verify", "--seed", "99"]) == 0
        first = capsys.readouterr().out
        assert main(["verify", "--seed", "99"]) == 0
        assert capsys.readouterr().out == first

    def test_injected_failure_is_caught(self, capsys):
        rc = main(["verify", "--inject-failure"])
        out = capsys.readouterr().out
        assert rc == 1
        assert "FAIL" in out


class TestSweepCommand:
    def test_quadratic_sweep_holds(self, tmp_path, capsys):
        cfg = tmp_path / "sweep_quadratic.yaml"
        cfg.write_text(SWEEP_DOC)
        out = tmp_path / "sweep"
        rc = main(["sweep-hbar", str(cfg), "--out", str(out)])
        captured = capsys.readouterr().out
        assert rc == 0
        assert "verdict: HOLDS" in captured
        assert "fitted_slope: exact-zero-gap" in captured
        table = (out / "convergence.csv").read_text().splitlines()
        assert table[0] == "hbar,rate_gap,lhs_gap,purity"
        assert len(table) == 3
        for row in table[1:]:
            assert float(row.split(",")[1]) == 0.0

    def test_wrong_sector_rejected(self, tmp_path, capsys):
        rc = main(["sweep-hbar", TWO_LEVEL, "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "hbar_sweep" in capsys.readouterr().err
