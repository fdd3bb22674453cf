"""Grid sweeps over (n, delta, cost, density) and their CSV row layouts."""

import logging
from typing import Iterator, List, Sequence, Tuple

from joblib import Parallel, delayed
from tqdm import tqdm

from app.models import BatchStats, ClassLabel, RunResult, SimConfig, SweepSpec, Topology
from app.utils import format_decimal, format_grid_value

from .dynamics import run_batch
from .stability import predicted_stable_topologies

logger = logging.getLogger(__name__)

SWEEP_HEADER = [
    "delta",
    "cost",
    "density",
    "n",
    "reps",
    "modal_class",
    "mean_utility",
    "mean_iterations",
    "mean_acts",
    "mean_final_clustering",
    *(f"freq_{label.value}" for label in ClassLabel),
    "converged",
    "dynamic_equilibria",
]
REGIONS_HEADER = ["structure", "n", "delta", "cost", "observed", "predicted", "match"]
TRAJECTORY_HEADER = ["iteration", "clustering", "utility", "acts"]

# Observed structure -> stable topology families it belongs to
REGION_STRUCTURES = {
    ClassLabel.COMPLETE: (Topology.COMPLETE,),
    ClassLabel.NULL: (Topology.NULL,),
    ClassLabel.BIPARTITE_COMPLETE: (Topology.COMPLETE_BIPARTITE,),
    ClassLabel.EQUI_K_PARTITE_COMPLETE: (Topology.COMPLETE_EQUI_TRIPARTITE, Topology.COMPLETE_EQUI_K_PARTITE),
}

CellResult = Tuple[SimConfig, BatchStats]


def run_sweep(spec: SweepSpec) -> List[CellResult]:
    """Run every cell of the sweep; results come back in cell order whatever the worker count."""
    cells = spec.cells()
    logger.info(f"Sweeping {len(cells)} cells x {spec.repetitions} runs with {spec.workers or 'all'} workers")
    if spec.workers == 1:
        iterator = (run_batch(cfg, index) for index, cfg in enumerate(cells))
    else:
        iterator = Parallel(n_jobs=spec.workers or -1, return_as="generator")(
            delayed(run_batch)(cfg, index) for index, cfg in enumerate(cells)
        )
    stats = list(tqdm(iterator, total=len(cells), desc="sweep", disable=not spec.progress))
    return list(zip(cells, stats))


def sweep_rows(results: Sequence[CellResult]) -> Iterator[list]:
    for cfg, stats in results:
        p = cfg.params
        yield [
            format_grid_value(p.delta),
            format_grid_value(p.cost),
            format_grid_value(cfg.density),
            cfg.n,
            stats.repetitions,
            stats.modal_class.value,
            format_decimal(stats.mean_utility),
            format_decimal(stats.mean_iterations),
            format_decimal(stats.mean_acts),
            format_decimal(stats.mean_final_clustering),
            *(stats.class_frequencies[label] for label in ClassLabel),
            stats.converged_runs,
            stats.dynamic_equilibria,
        ]


def region_rows(results: Sequence[CellResult]) -> Iterator[list]:
    """Observed (any density, any run) against predicted stability per structure and (n, delta, cost)."""
    observed = {}
    order = []
    for cfg, stats in results:
        key = (cfg.n, cfg.params.delta, cfg.params.cost)
        if key not in observed:
            observed[key] = set()
            order.append((key, cfg.params))
        observed[key].update(label for label, count in stats.match_frequencies.items() if count > 0)

    for structure, families in REGION_STRUCTURES.items():
        for (n, delta, cost), params in order:
            predicted = bool(predicted_stable_topologies(params).topologies.intersection(families))
            seen = structure in observed[(n, delta, cost)]
            yield [
                structure.value,
                n,
                format_grid_value(delta),
                format_grid_value(cost),
                int(seen),
                int(predicted),
                int(seen == predicted),
            ]


def trajectory_rows(run: RunResult) -> Iterator[list]:
    for point in run.trajectory:
        yield [point.iteration, format_decimal(point.clustering), format_decimal(point.utility), point.acts]
