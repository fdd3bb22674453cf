"""Agent-based network formation by single-link best responses.

Each iteration visits the nodes in a fresh uniformly random order; every node
applies its best response immediately. A run converges after ``idle_terminate``
consecutive iterations without any change and is cut off at ``max_iterations``.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.models import (
    ActionKind,
    BatchStats,
    ClassifierConfig,
    ClassLabel,
    InvariantViolation,
    RunResult,
    SimConfig,
    TrajectoryPoint,
)
from app.models.graph import random_graph
from app.utils import mix_seed

from .classifier import classify
from .payoff import total_utility
from .stability import best_response, is_pairwise_stable

logger = logging.getLogger(__name__)


def run_once(cfg: SimConfig, run_seed: int) -> RunResult:
    """Simulate one run from a random initial graph.

    Args:
        cfg: simulation settings
        run_seed: seed of the run's private random stream

    Returns:
        RunResult: final graph, termination flags, act count, trajectory and class

    Raises:
        InvariantViolation: a converged run (indifferent adds off) ends in an unstable graph
    """
    p = cfg.params
    rng = np.random.default_rng(run_seed)
    g = random_graph(cfg.n, cfg.density, rng)
    trajectory = [TrajectoryPoint(0, g.clustering_coefficient(), total_utility(g, p), 0)]
    seen: Dict[bytes, int] = {g.canonical_state_key(): 0} if cfg.detect_cycles else {}

    acts = 0
    idle = 0
    iteration = 0
    converged = False
    dynamic_equilibrium = False
    while iteration < cfg.max_iterations:
        iteration += 1
        changed = False
        for node in rng.permutation(cfg.n):
            node = int(node)
            action = best_response(g, node, p, rng, cfg.allow_indifferent_adds)
            if action.kind == ActionKind.PASS:
                continue
            g = g.toggled(node, action.target)
            acts += 1
            changed = True

        trajectory.append(TrajectoryPoint(iteration, g.clustering_coefficient(), total_utility(g, p), acts))
        if not changed:
            idle += 1
            if idle >= cfg.idle_terminate:
                converged = True
                break
            continue

        idle = 0
        if cfg.detect_cycles:
            key = g.canonical_state_key()
            if key in seen and not dynamic_equilibrium:
                logger.debug(f"Seed {run_seed}: state of iteration {seen[key]} revisited at iteration {iteration}")
                dynamic_equilibrium = True
            seen[key] = iteration

    if converged and not cfg.allow_indifferent_adds:
        report = is_pairwise_stable(g, p)
        if not report.stable:
            raise InvariantViolation(f"Run with seed {run_seed} converged to an unstable graph: {report.witness}")
    if not converged:
        logger.debug(f"Seed {run_seed}: stopped after {iteration} iterations without an idle streak")

    result = classify(g, ClassifierConfig(cfg.tau_fraction))
    return RunResult(
        final_graph=g,
        converged=converged,
        dynamic_equilibrium=dynamic_equilibrium,
        iterations_used=iteration,
        acts=acts,
        trajectory=tuple(trajectory),
        label=result.primary,
        all_matches=result.all_matches,
        seed=run_seed,
    )


def aggregate_runs(results: Sequence[RunResult]) -> BatchStats:
    """Reduce run results to per-cell statistics (exact means)."""
    if not results:
        raise ValueError("Cannot aggregate an empty batch")
    reps = len(results)
    frequencies = {label: 0 for label in ClassLabel}
    matches = {label: 0 for label in ClassLabel}
    for run in results:
        frequencies[run.label] += 1
        for label in run.all_matches:
            matches[label] += 1

    # ties go to the label listed first
    modal = max(ClassLabel, key=lambda label: (frequencies[label], -label.rank))
    return BatchStats(
        repetitions=reps,
        class_frequencies=frequencies,
        match_frequencies=matches,
        modal_class=modal,
        mean_utility=Fraction(sum((run.trajectory[-1].utility for run in results), Fraction(0)), reps),
        mean_iterations=Fraction(sum(run.iterations_used for run in results), reps),
        mean_acts=Fraction(sum(run.acts for run in results), reps),
        mean_final_clustering=Fraction(sum((run.trajectory[-1].clustering for run in results), Fraction(0)), reps),
        converged_runs=sum(1 for run in results if run.converged),
        dynamic_equilibria=sum(1 for run in results if run.dynamic_equilibrium),
    )


def run_seeds(cfg: SimConfig, cell_index: int = 0) -> List[int]:
    return [mix_seed(cfg.master_seed, cell_index, rep) for rep in range(cfg.repetitions)]


def run_batch(cfg: SimConfig, cell_index: int = 0, results: Optional[List[RunResult]] = None) -> BatchStats:
    """Run ``cfg.repetitions`` independent runs and aggregate them.

    Args:
        cfg: simulation settings
        cell_index: grid-cell index mixed into every run seed
        results: optional list that receives the individual RunResults

    Returns:
        BatchStats: class frequencies and exact means over the batch
    """
    runs = [run_once(cfg, seed) for seed in run_seeds(cfg, cell_index)]
    if results is not None:
        results.extend(runs)
    stats = aggregate_runs(runs)
    logger.debug(
        f"Cell {cell_index} ({cfg.params}, density={cfg.density}, n={cfg.n}): "
        f"modal {stats.modal_class.value}, {stats.converged_runs}/{stats.repetitions} converged"
    )
    return stats
