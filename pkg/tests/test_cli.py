"""Tests for the tunersim command."""

import json
from pathlib import Path

import pytest

from tunersim.cli import EXIT_CONFIG, EXIT_DIVERGED, EXIT_OK, main


@pytest.fixture(scope="module")
def fig2_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """fig2 written once through the CLI."""
    root = tmp_path_factory.mktemp("runs")
    assert main(["run", "--config", "fig2", "--out", str(root)]) == EXIT_OK
    return root / "fig2"


class TestRun:
    """tunersim run."""

    def test_writes_artifacts(self, fig2_dir: Path) -> None:
        """config, report and one trace per algorithm."""
        names = sorted(p.name for p in fig2_dir.iterdir())
        assert names == ["config.json", "report.json", "trace_HB.csv", "trace_NA.csv",
                         "trace_NGD.csv"]

    def test_prints_summary(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """One line per algorithm and the artifact directory."""
        assert main(["run", "--config", "fig2", "--out", str(tmp_path), "--workers", "3"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("NGD: |e_y|=")
        assert f"artifacts: {tmp_path / 'fig2'}" in out

    def test_unknown_config(self, capsys: pytest.CaptureFixture[str]) -> None:
        """An unknown config exits with the configuration code."""
        assert main(["run", "--config", "no-such-config"]) == EXIT_CONFIG
        assert "error:" in capsys.readouterr().err

    def test_invalid_config(self, tmp_path: Path) -> None:
        """A config failing validation exits with code 1."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"name": "bad", "algorithms": [], "horizon": 1}))
        assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_divergence_exit_code(self, tmp_path: Path) -> None:
        """A diverging run exits with code 2."""
        path = tmp_path / "unstable.json"
        path.write_text(json.dumps({
            "name": "unstable",
            "algorithms": [{"algorithm": "HB-classical", "beta": 0.99, "gamma": 10.0}],
            "source": {"kind": "constant", "phi": [1.0]},
            "theta_star": [0.0],
            "init_theta": [1.0],
            "horizon": 1000,
        }))
        assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == EXIT_DIVERGED

    def test_usage_error(self) -> None:
        """Missing required options exit with code 1."""
        with pytest.raises(SystemExit) as exc_info:
            main(["run"])
        assert exc_info.value.code == EXIT_CONFIG


class TestOtherCommands:
    """tunersim list, analyze, compare and plot."""

    def test_list(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Bundled configs are listed with their inferred fields."""
        assert main(["list"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "fig1: sinusoid-bank, horizon 2000" in out
        assert "fig2: piecewise-constant, horizon 500, NGD, HB, NA (inferred: horizon)" in out

    def test_analyze(self, fig2_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """analyze prints the algorithm report as JSON."""
        code = main(["analyze", "--trace", str(fig2_dir / "trace_NA.csv"), "--delta-t", "10"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["label"] == "NA"
        assert report["pe"]["delta_t"] == 10

    def test_analyze_missing_trace(self, tmp_path: Path) -> None:
        """A missing trace exits with code 1."""
        assert main(["analyze", "--trace", str(tmp_path / "x.csv"), "--delta-t", "5"]) == 1

    def test_compare(self, fig2_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """compare prints a CSV table by default and JSON on request."""
        assert main(["compare", str(fig2_dir)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("run,algorithm,k_output,k_param,k_both")
        assert len(lines) == 4

        assert main(["compare", str(fig2_dir), str(fig2_dir), "--format", "json"]) == EXIT_OK
        assert len(json.loads(capsys.readouterr().out)["rows"]) == 6

    def test_plot(self, fig2_dir: Path, tmp_path: Path,
                  capsys: pytest.CaptureFixture[str]) -> None:
        """plot writes one two-column file and prints its path."""
        code = main(["plot", "--trace", str(fig2_dir / "trace_HB.csv"), "--quantity", "v",
                     "--scale", "log10-abs", "--out", str(tmp_path)])
        assert code == EXIT_OK
        path = Path(capsys.readouterr().out.strip())
        assert path == tmp_path / "plot_HB_v_log10-abs.csv"
        assert path.read_text().startswith("k,value\n1,")

    def test_plot_v_for_ngd(self, fig2_dir: Path, tmp_path: Path) -> None:
        """V is unavailable for NGD traces."""
        code = main(["plot", "--trace", str(fig2_dir / "trace_NGD.csv"), "--quantity", "v",
                     "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
