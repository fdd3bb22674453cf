"""
Sweep engine tests: cell layout, row formats and region comparison.
"""

from fractions import Fraction

from app.game.dynamics import run_once
from app.game.sweep import REGIONS_HEADER, SWEEP_HEADER, region_rows, run_sweep, sweep_rows, trajectory_rows
from app.models import ClassLabel, Params, SimConfig, SweepSpec


def make_spec(**kwargs):
    settings = dict(
        n_values=(4,),
        delta_values=(Fraction(1, 10),),
        cost_values=(Fraction(1, 2),),
        densities=(Fraction(0), Fraction(7, 10)),
        repetitions=2,
        master_seed=7,
        output_dir="output",
        max_iterations=50,
        idle_terminate=2,
        allow_indifferent_adds=False,
        detect_cycles=True,
        tau_fraction=Fraction(1, 10),
        workers=1,
    )
    settings.update(kwargs)
    return SweepSpec(**settings)


class TestSweepSpec:
    """Test grid cell expansion."""

    def test_cell_order(self):
        """Cells vary density fastest, then cost, then delta, then n."""
        spec = make_spec(
            n_values=(4, 5),
            delta_values=(Fraction(1, 2), Fraction(1)),
            cost_values=(Fraction(1, 2),),
            densities=(Fraction(0),),
        )
        cells = spec.cells()
        assert [(c.n, c.params.delta) for c in cells] == [(4, Fraction(1, 2)), (4, 1), (5, Fraction(1, 2)), (5, 1)]
        assert all(c.repetitions == 2 for c in cells)


class TestRunSweep:
    """Test sweep execution and row output."""

    def test_rows(self):
        """One row per cell in header order."""
        results = run_sweep(make_spec())
        rows = list(sweep_rows(results))
        assert len(rows) == 2
        assert all(len(row) == len(SWEEP_HEADER) for row in rows)
        first = dict(zip(SWEEP_HEADER, rows[0]))
        assert first["delta"] == "0.1"
        assert first["cost"] == "0.5"
        assert first["density"] == "0"
        assert first["modal_class"] == "NULL"
        assert first["freq_NULL"] == 2
        assert first["mean_acts"] == "0.000000"
        second = dict(zip(SWEEP_HEADER, rows[1]))
        assert second["density"] == "0.7"
        assert second["mean_acts"] == "4.000000"

    def test_worker_count_does_not_change_results(self):
        """Parallel sweeps come back in cell order with identical statistics."""
        inline = run_sweep(make_spec())
        parallel = run_sweep(make_spec(workers=2))
        assert list(sweep_rows(inline)) == list(sweep_rows(parallel))

    def test_region_rows(self):
        """Null is predicted and observed; complete is neither."""
        rows = [dict(zip(REGIONS_HEADER, row)) for row in region_rows(run_sweep(make_spec()))]
        assert len(rows) == 4
        by_structure = {row["structure"]: row for row in rows}
        assert by_structure[ClassLabel.NULL.value]["observed"] == 1
        assert by_structure[ClassLabel.NULL.value]["predicted"] == 1
        assert by_structure[ClassLabel.NULL.value]["match"] == 1
        assert by_structure[ClassLabel.COMPLETE.value]["observed"] == 0
        assert by_structure[ClassLabel.COMPLETE.value]["predicted"] == 0
        assert by_structure[ClassLabel.COMPLETE.value]["match"] == 1

    def test_trajectory_rows(self):
        """One row per iteration, starting at 0."""
        cfg = SimConfig(n=4, density=Fraction(0), params=Params("1/2", "1/10"), idle_terminate=1)
        run = run_once(cfg, 1)
        rows = list(trajectory_rows(run))
        assert len(rows) == len(run.trajectory)
        assert rows[0] == [0, "0.000000", "0.000000", 0]
        assert rows[-1][1] == "1.000000"
