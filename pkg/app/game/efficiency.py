"""Efficient (utility-maximizing) networks and the extremal bounds behind them.

Proven regions, with x = delta - c and y = delta^2:

    x < 0, y < -x      null graph
    x < 0, y > -x      Turan graph
    x = 0              Turan graph
    x > 0, y >= 3x     Turan graph
    x > 0, x > 2y      complete graph

The remaining band (x > 0, y < 3x, x <= 2y) is only conjectured: Turan when
x <= y, otherwise Complete when x > n/(n-2) y and Turan when below.

The regions assume both Turan partitions have at least 2 nodes. On 2 or 3 nodes
the proven verdict is the best of the null, Turan and complete graphs instead.
"""

import logging
from fractions import Fraction
from math import comb
from typing import List, Optional, Tuple

from app.models import (
    Certainty,
    ClassLabel,
    EfficiencyCandidate,
    EfficiencyLabel,
    EfficiencyVerdict,
    Graph,
    GraphError,
    Params,
    Payoff,
)
from app.models.graph import empty, standard, turan

from .classifier import classify
from .payoff import total_utility

logger = logging.getLogger(__name__)

REGION_MIN_NODES = 4


def triangle_lower_bound(n: int, e: int) -> int:
    """Fewest triangles a graph with n nodes and e edges can have: max(0, ceil(n(4e - n^2)/9))."""
    if n < 1:
        raise GraphError(f"Graph size must be positive, got {n}")
    if e < 0 or e > comb(n, 2):
        raise GraphError(f"A graph on {n} nodes has between 0 and {comb(n, 2)} edges, got {e}")
    numerator = n * (4 * e - n * n)
    return max(0, -(-numerator // 9))


def closed_form_utility(label: EfficiencyLabel, n: int, p: Params) -> Payoff:
    """Total utility of the null, Turan (n >= 4) or complete graph without building it."""
    x, y = p.net_link_value, p.bridge_value
    if label == EfficiencyLabel.NULL:
        return Fraction(0)
    if label == EfficiencyLabel.COMPLETE:
        return n * (n - 1) * x
    if label == EfficiencyLabel.TURAN:
        if n < 4:
            raise GraphError("The closed-form Turan utility needs partitions of at least 2 nodes (n >= 4)")
        return 2 * (n * n // 4) * (x + y)
    raise GraphError(f"No closed-form utility for {label!r}")


def efficiency_region(p: Params) -> str:
    x, y = p.net_link_value, p.bridge_value
    if x < 0:
        if y < -x:
            return "null"
        if y == -x:
            return "null-turan-boundary"
        return "turan-below-cost"
    if x == 0:
        return "turan-equal"
    if y >= 3 * x:
        return "turan-bridging"
    if x > 2 * y:
        return "complete"
    return "conjecture-turan" if x <= y else "conjecture-threshold"


def _candidate(label: EfficiencyLabel, n: int, p: Params) -> EfficiencyCandidate:
    if label == EfficiencyLabel.NULL:
        graph = empty(n)
    elif label == EfficiencyLabel.TURAN:
        graph = turan(n)
    else:
        graph = standard("complete", n)
    return EfficiencyCandidate(label, graph, total_utility(graph, p))


def _ranked(candidates: List[EfficiencyCandidate]) -> Tuple[EfficiencyCandidate, ...]:
    # equal utilities: fewer edges first
    return tuple(sorted(candidates, key=lambda c: (-c.utility, c.graph.edge_count)))


def _conjectured_winner(p: Params, n: int, region: str) -> Optional[EfficiencyLabel]:
    if region == "conjecture-turan" or n <= 2:
        return EfficiencyLabel.TURAN if n > 2 else EfficiencyLabel.COMPLETE
    x, y = p.net_link_value, p.bridge_value
    threshold = Fraction(n, n - 2) * y
    if x > threshold:
        return EfficiencyLabel.COMPLETE
    if x < threshold:
        return EfficiencyLabel.TURAN
    return None


def _oracle_label(g: Graph) -> EfficiencyLabel:
    matches = classify(g).all_matches
    if ClassLabel.COMPLETE in matches:
        return EfficiencyLabel.COMPLETE
    if ClassLabel.TURAN in matches:
        return EfficiencyLabel.TURAN
    if ClassLabel.NULL in matches:
        return EfficiencyLabel.NULL
    return EfficiencyLabel.OTHER


def efficient_graph(p: Params, n: int, resolve_conjectures_with_oracle: bool = False) -> EfficiencyVerdict:
    """Efficient network for (delta, cost) on ``n`` nodes.

    Args:
        p: link parameters
        n: node count (>= 2)
        resolve_conjectures_with_oracle: settle the conjectured band by exhaustive enumeration

    Returns:
        EfficiencyVerdict: proven winner, or the ranked Turan/Complete candidates in the conjectured band

    Raises:
        OracleLimitError: oracle resolution requested beyond the enumeration limit
    """
    if n < 2:
        raise GraphError(f"Efficiency needs at least 2 nodes, got {n}")
    region = efficiency_region(p)
    proven = {
        "null": EfficiencyLabel.NULL,
        "null-turan-boundary": EfficiencyLabel.NULL,
        "turan-below-cost": EfficiencyLabel.TURAN,
        "turan-equal": EfficiencyLabel.TURAN,
        "turan-bridging": EfficiencyLabel.TURAN,
        "complete": EfficiencyLabel.COMPLETE,
    }
    if region in proven and n < REGION_MIN_NODES:
        # on 3 nodes a single link (2x) never beats both the null (0) and the triangle (6x)
        labels = [EfficiencyLabel.NULL, EfficiencyLabel.COMPLETE] + ([EfficiencyLabel.TURAN] if n == 3 else [])
        winner = _ranked([_candidate(label, n, p) for label in labels])[0]
        return EfficiencyVerdict(winner.label, winner.graph, winner.utility, Certainty.PROVEN, "small-n")
    if region in proven:
        winner = _candidate(proven[region], n, p)
        return EfficiencyVerdict(winner.label, winner.graph, winner.utility, Certainty.PROVEN, region)

    candidates = _ranked([_candidate(EfficiencyLabel.TURAN, n, p), _candidate(EfficiencyLabel.COMPLETE, n, p)])
    predicted = _conjectured_winner(p, n, region)
    if not resolve_conjectures_with_oracle:
        top = candidates[0]
        return EfficiencyVerdict(
            EfficiencyLabel.CONJECTURED, top.graph, top.utility, Certainty.CONJECTURED, region, candidates, predicted
        )

    from .oracle import enumerate_graphs

    result = enumerate_graphs(n, p)
    graph = Graph.from_code(n, result.efficient_graphs[0])
    label = _oracle_label(graph)
    if predicted is not None and label != predicted:
        logger.info(f"n={n}, {p}: exhaustive search finds {label.value}, conjecture predicts {predicted.value}")
    return EfficiencyVerdict(
        label, graph, result.max_utility, Certainty.CONJECTURED, region, candidates, predicted, resolved_by_oracle=True
    )
