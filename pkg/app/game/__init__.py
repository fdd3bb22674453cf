"""
Game engines of the network-formation lab.

- payoff: node utilities and single-link deviation gains
- stability: pairwise stability, predicted stable topologies, best responses
- classifier: structural classification of final graphs
- dynamics: asynchronous best-response runs and batches
- efficiency: efficient graphs and extremal bounds
- pos: price of stability
- oracle: exhaustive enumeration for small n
- verification: analytic claims checked against the oracle
- sweep: parameter grids and their CSV rows
"""

from .classifier import classify, greedy_color, ideal_shared_order, msd
from .dynamics import run_batch, run_once
from .efficiency import efficient_graph, triangle_lower_bound
from .oracle import enumerate_graphs, enumerate_grid
from .payoff import deviation_gains, node_utility, total_utility
from .pos import pos_grid, price_of_stability
from .stability import best_response, is_pairwise_stable, predicted_stable_topologies
from .sweep import run_sweep
from .verification import verify_predictions

__all__ = [
    "best_response",
    "classify",
    "deviation_gains",
    "efficient_graph",
    "enumerate_graphs",
    "enumerate_grid",
    "greedy_color",
    "ideal_shared_order",
    "is_pairwise_stable",
    "msd",
    "node_utility",
    "pos_grid",
    "predicted_stable_topologies",
    "price_of_stability",
    "run_batch",
    "run_once",
    "run_sweep",
    "total_utility",
    "triangle_lower_bound",
    "verify_predictions",
]
