"""
Simulation command tests.

This module runs every command through the Flask CLI runner and checks:
- Output files, row counts and manifests
- Settings precedence between flags, the --config file and defaults
- Exit codes for usage, I/O and invariant errors
"""

import configparser
import csv

SWEEP_ARGS = ["--n", "4", "--step", "1/2", "--densities", "0", "--reps", "2", "--workers", "1"]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def read_manifest(path):
    manifest = configparser.ConfigParser(interpolation=None)
    manifest.read(path)
    return manifest


class TestSweep:
    """Test the sweep command."""

    def test_writes_one_row_per_cell(self, runner, tmp_path):
        """Step 1/2 gives delta and cost in {1/2, 1}: four cells."""
        result = runner.invoke(args=["sweep", *SWEEP_ARGS, "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        rows = read_rows(tmp_path / "sweep.csv")
        assert len(rows) == 4
        assert [(row["delta"], row["cost"]) for row in rows] == [("0.5", "0.5"), ("0.5", "1"), ("1", "0.5"), ("1", "1")]
        assert all(row["reps"] == "2" for row in rows)
        assert rows[1]["modal_class"] == "NULL"
        assert rows[3]["modal_class"] == "NULL"

    def test_output_is_reproducible(self, runner, tmp_path):
        """Same settings, byte-identical CSV."""
        first, second = tmp_path / "first", tmp_path / "second"
        runner.invoke(args=["sweep", *SWEEP_ARGS, "--out", str(first)])
        runner.invoke(args=["sweep", *SWEEP_ARGS, "--out", str(second)])
        assert (first / "sweep.csv").read_bytes() == (second / "sweep.csv").read_bytes()

    def test_manifest(self, runner, tmp_path):
        """The manifest records the command and effective settings."""
        runner.invoke(args=["sweep", *SWEEP_ARGS, "--out", str(tmp_path)])
        manifest = read_manifest(tmp_path / "manifest.ini")
        assert manifest["manifest"]["command"] == "sweep"
        assert manifest["settings"]["reps"] == "2"
        assert manifest["settings"]["delta-range"] == "1/2:1"

    def test_config_file_between_defaults_and_flags(self, runner, tmp_path):
        """Config file values replace defaults; flags replace config file values."""
        settings = tmp_path / "run.cfg"
        settings.write_text("reps = 1\nseed = 5\n", encoding="utf-8")
        out = tmp_path / "out"
        args = ["sweep", *SWEEP_ARGS, "--config", str(settings), "--out", str(out)]
        result = runner.invoke(args=args)
        assert result.exit_code == 0, result.output
        manifest = read_manifest(out / "manifest.ini")
        assert manifest["settings"]["reps"] == "2"
        assert manifest["settings"]["seed"] == "5"

    def test_bad_step(self, runner, tmp_path):
        """A step that does not divide 1 is a usage error."""
        result = runner.invoke(args=["sweep", "--step", "3/10", "--out", str(tmp_path)])
        assert result.exit_code == 1

    def test_unknown_flag(self, runner, tmp_path):
        """Flags the command does not define are usage errors."""
        result = runner.invoke(args=["sweep", *SWEEP_ARGS, "--colour", "blue", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "--colour" in result.output

    def test_unknown_config_key(self, runner, tmp_path):
        """Unknown settings file keys are usage errors."""
        settings = tmp_path / "run.cfg"
        settings.write_text("colour = blue\n", encoding="utf-8")
        result = runner.invoke(args=["sweep", *SWEEP_ARGS, "--config", str(settings), "--out", str(tmp_path)])
        assert result.exit_code == 1

    def test_missing_config_file(self, runner, tmp_path):
        """An unreadable settings file is an I/O error."""
        result = runner.invoke(args=["sweep", *SWEEP_ARGS, "--config", str(tmp_path / "missing.cfg")])
        assert result.exit_code == 2

    def test_output_path_is_a_file(self, runner, tmp_path):
        """Writing below a regular file is an I/O error."""
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        result = runner.invoke(args=["sweep", *SWEEP_ARGS, "--out", str(blocker)])
        assert result.exit_code == 2


class TestRegions:
    """Test the regions command."""

    def test_regions_csv(self, runner, tmp_path):
        """Four structures per (n, delta, cost) cell."""
        result = runner.invoke(args=["regions", *SWEEP_ARGS, "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        rows = read_rows(tmp_path / "regions.csv")
        assert len(rows) == 16
        null = [row for row in rows if row["structure"] == "NULL" and (row["delta"], row["cost"]) == ("0.5", "1")]
        assert (null[0]["observed"], null[0]["predicted"], null[0]["match"]) == ("1", "1", "1")


class TestRun:
    """Test the single-run command."""

    def test_run_then_classify(self, runner, tmp_path):
        """The final graph of a run can be classified from its file."""
        args = ["run", "--n", "4", "--delta", "1/2", "--cost", "1/10", "--density", "0", "--out", str(tmp_path)]
        result = runner.invoke(args=args)
        assert result.exit_code == 0, result.output
        assert "COMPLETE" in result.output
        trajectory = read_rows(tmp_path / "trajectory.csv")
        assert trajectory[0]["iteration"] == "0"

        result = runner.invoke(args=["classify", str(tmp_path / "final_graph.txt")])
        assert result.exit_code == 0, result.output
        assert "primary: COMPLETE" in result.output
        assert read_manifest(tmp_path / "manifest.ini")["manifest"]["command"] == "run"

    def test_delta_required(self, runner, tmp_path):
        """delta and cost have no defaults."""
        result = runner.invoke(args=["run", "--cost", "1/2", "--out", str(tmp_path)])
        assert result.exit_code == 1


class TestAtlas:
    """Test the exhaustive verification command."""

    def test_small_atlas(self, runner, tmp_path):
        """Four nodes, step 1/2: no failed claims plus a stable-set dump."""
        args = ["atlas", "--n", "4", "--step", "1/2", "--delta", "1/2", "--cost", "1/2", "--out", str(tmp_path)]
        result = runner.invoke(args=args)
        assert result.exit_code == 0, result.output
        assert "0 failed" in result.output
        assert read_rows(tmp_path / "verify_n4.csv")
        assert (tmp_path / "stable_n4.txt").read_text(encoding="utf-8").startswith("# n=4")

    def test_oracle_limit(self, runner, tmp_path):
        """Node counts above the oracle limit are usage errors."""
        result = runner.invoke(args=["atlas", "--n", "7", "--step", "1/2", "--out", str(tmp_path)])
        assert result.exit_code == 1


class TestPos:
    """Test the PoS grid command."""

    def test_pos_csv(self, runner, tmp_path):
        """Step 1/4: nine interior cells."""
        result = runner.invoke(args=["pos", "--n", "6", "--step", "1/4", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        rows = read_rows(tmp_path / "pos.csv")
        assert len(rows) == 9
        middle = rows[4]
        assert (middle["delta"], middle["cost"], middle["kind"]) == ("0.5", "0.5", "EXACT")
        assert middle["value"] == "1.000000"

    def test_unknown_method(self, runner, tmp_path):
        """Unknown methods are usage errors."""
        result = runner.invoke(args=["pos", "--method", "bogus", "--out", str(tmp_path)])
        assert result.exit_code == 1


class TestClassify:
    """Test the classify command."""

    def test_classify_file(self, runner, tmp_path, five_node_graph):
        """Primary label, every match and the MSDs."""
        path = tmp_path / "graph.txt"
        path.write_text(five_node_graph.to_edge_list(), encoding="utf-8")
        result = runner.invoke(args=["classify", str(path)])
        assert result.exit_code == 0, result.output
        assert "primary: NEAR-SHARED" in result.output
        assert "msd SHARED: 3/5" in result.output

    def test_threshold_flag(self, runner, tmp_path, five_node_graph):
        """--tau-fraction 0 turns off near labels."""
        path = tmp_path / "graph.txt"
        path.write_text(five_node_graph.to_edge_list(), encoding="utf-8")
        result = runner.invoke(args=["classify", str(path), "--tau-fraction", "0"])
        assert "primary: K-PARTITE" in result.output

    def test_malformed_file(self, runner, tmp_path):
        """Malformed edge lists are usage errors."""
        path = tmp_path / "graph.txt"
        path.write_text("n 3\n0 7\n", encoding="utf-8")
        assert runner.invoke(args=["classify", str(path)]).exit_code == 1

    def test_missing_file(self, runner, tmp_path):
        """Missing files are I/O errors."""
        assert runner.invoke(args=["classify", str(tmp_path / "missing.txt")]).exit_code == 2

    def test_missing_path_argument(self, runner):
        """Leaving out the edge-list path is a usage error."""
        assert runner.invoke(args=["classify"]).exit_code == 1
