"""Localized node utility, total utility and single-link deviation gains.

A node with degree d whose neighbors share s links earns

    u = d (delta - c) + b(d, s) delta^2,   b(d, s) = d - 2 s / (d - 1)

where b counts, per neighbor, the neighbor pairs it bridges. b is 0 for d <= 1.
All arithmetic is exact (fractions.Fraction).
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from app.models import DeviationKind, Graph, GraphError, Params, Payoff

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def bridging_factor(d: int, s: int) -> Fraction:
    """d * (1 - s / C(d, 2)), defined as 0 when d <= 1."""
    if d <= 1:
        return Fraction(0)
    return d - Fraction(2 * s, d - 1)


@lru_cache(maxsize=65536)
def utility_from_counts(d: int, s: int, p: Params) -> Payoff:
    return d * p.net_link_value + bridging_factor(d, s) * p.bridge_value


def node_utility(g: Graph, i: int, p: Params) -> Payoff:
    return utility_from_counts(g.degree(i), g.sigma(i), p)


def node_utilities(g: Graph, p: Params) -> Tuple[Payoff, ...]:
    return tuple(node_utility(g, i, p) for i in range(g.n))


def total_utility(g: Graph, p: Params) -> Payoff:
    """Sum of node utilities."""
    return sum(node_utilities(g, p), Fraction(0))


def endpoint_gain(g: Graph, i: int, j: int, p: Params) -> Payoff:
    """Change in u_i when the link (i, j) is toggled.

    Only i's degree and the links among i's neighbors change, by one and by the
    number of common neighbors of i and j respectively.
    """
    d = g.degree(i)
    s = g.sigma(i)
    shared = g.common_neighbors(i, j)
    if g.has_edge(i, j):
        return utility_from_counts(d - 1, s - shared, p) - utility_from_counts(d, s, p)
    return utility_from_counts(d + 1, s + shared, p) - utility_from_counts(d, s, p)


def deviation_gains(g: Graph, i: int, j: int, p: Params) -> Tuple[Payoff, Payoff, DeviationKind]:
    """Gains of both endpoints when (i, j) is deleted (if present) or added (if absent)."""
    if i == j:
        raise GraphError(f"A deviation needs two distinct nodes, got ({i}, {j})")
    kind = DeviationKind.DELETE_EDGE if g.has_edge(i, j) else DeviationKind.ADD_EDGE
    return endpoint_gain(g, i, j, p), endpoint_gain(g, j, i, p), kind


def example_payoffs(kind: str, n: int, p: Params) -> Dict[str, Payoff]:
    """Closed-form node utilities of the star, wheel and cycle networks.

    Args:
        kind: "star" (n >= 3), "wheel" (n >= 5) or "cycle" (n >= 4)
        n: node count
        p: link parameters

    Returns:
        Dict[str, Payoff]: utility per node role ("hub"/"leaf", "hub"/"rim" or "node")
    """
    x, y = p.net_link_value, p.bridge_value
    if kind == "star" and n >= 3:
        return {"hub": (n - 1) * x + (n - 1) * y, "leaf": x}
    if kind == "wheel" and n >= 5:
        hub_bridging = Fraction((n - 1) * (n - 4), n - 2)
        return {"hub": (n - 1) * x + hub_bridging * y, "rim": 3 * x + y}
    if kind == "cycle" and n >= 4:
        return {"node": 2 * x + 2 * y}
    raise GraphError(f"No closed-form payoffs for a {kind} graph on {n} nodes")
