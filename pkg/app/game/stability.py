"""Pairwise stability: certification, closed-form regions and the best-response rule."""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from app.models import (
    Action,
    ActionKind,
    Deviation,
    DeviationKind,
    Graph,
    GraphError,
    Params,
    Payoff,
    RegionPrediction,
    StabilityReport,
    Topology,
)
from app.models.graph import complete_multipartite, empty, standard, turan

from .payoff import utility_from_counts

logger = logging.getLogger(__name__)

TWO_THIRDS = Fraction(2, 3)


def _toggle_gain(d: int, s: int, shared: int, present: bool, p: Params) -> Payoff:
    before = utility_from_counts(d, s, p)
    if present:
        return utility_from_counts(d - 1, s - shared, p) - before
    return utility_from_counts(d + 1, s + shared, p) - before


class _GainTable:
    """Degree and neighbor-link counts of one graph, for repeated gain queries."""

    def __init__(self, g: Graph, p: Params):
        self.g = g
        self.p = p
        self.degrees = g.degrees()
        self.sigmas = tuple(g.sigma(i) for i in range(g.n))

    def gain(self, i: int, j: int) -> Payoff:
        g = self.g
        return _toggle_gain(
            self.degrees[i], self.sigmas[i], g.common_neighbors(i, j), g.has_edge(i, j), self.p
        )


def is_pairwise_stable(g: Graph, p: Params) -> StabilityReport:
    """Certify pairwise stability or return the first profitable deviation.

    Ordered pairs are scanned with the deviating node ascending, then its partner.
    A link fails if its owner strictly gains by dropping it; a missing link fails
    if one endpoint strictly gains and the other does not lose.
    """
    table = _GainTable(g, p)
    for i in range(g.n):
        for j in range(g.n):
            if i == j:
                continue
            gain_i = table.gain(i, j)
            if gain_i <= 0:
                continue
            gain_j = table.gain(j, i)
            if g.has_edge(i, j):
                return StabilityReport(False, Deviation(DeviationKind.DELETE_EDGE, i, j, gain_i, gain_j))
            if gain_j >= 0:
                return StabilityReport(False, Deviation(DeviationKind.ADD_EDGE, i, j, gain_i, gain_j))
    return StabilityReport(True)


def predicted_stable_topologies(p: Params) -> RegionPrediction:
    """Region id and the union of standard topologies predicted stable at (delta, cost).

    Regions are closed where the underlying conditions are non-strict; when the
    point lies in several rows the topologies of all of them are returned and the
    id of the most specific row is reported.
    """
    x, y = p.net_link_value, p.bridge_value
    if x == 0:
        return RegionPrediction(
            "2",
            frozenset(
                {Topology.COMPLETE, Topology.NULL, Topology.COMPLETE_BIPARTITE, Topology.COMPLETE_EQUI_K_PARTITE}
            ),
        )

    if x > 0:
        topologies = {Topology.COMPLETE}
        region = "1a"
        if x <= y:
            topologies.add(Topology.COMPLETE_BIPARTITE)
            if x < y:
                region = "1b"
        if x < TWO_THIRDS * y:
            topologies.add(Topology.COMPLETE_EQUI_TRIPARTITE)
            region = "1c"
        return RegionPrediction(region, frozenset(topologies))

    z = -x
    topologies = {Topology.NULL}
    if z > 2 * y:
        return RegionPrediction("3a", frozenset(topologies))
    region = "3c"
    if z <= y:
        topologies.add(Topology.COMPLETE_BIPARTITE)
        if z < y:
            region = "3b"
    if y <= z <= 2 * y:
        topologies.add(Topology.CYCLE)
    if z < TWO_THIRDS * y:
        topologies.add(Topology.COMPLETE_EQUI_TRIPARTITE)
        region = "3d"
    return RegionPrediction(region, frozenset(topologies))


def equipartite_margin(part_size: int, parts: int = 3) -> Fraction:
    """Largest |delta - c| / delta^2 at which a complete equi-k-partite graph stays stable.

    With k parts of size a, adding a link inside a part and dropping one across
    parts both leave the endpoint with bridging factor a - 1, a change of
    -(a - 1)/((k - 1)a - 1).
    """
    if part_size < 2 or parts < 2:
        raise GraphError(f"Need at least 2 parts of at least 2 nodes, got {parts} x {part_size}")
    return Fraction(part_size - 1, (parts - 1) * part_size - 1)


def build_topologies(topology: Topology, n: int) -> List[Graph]:
    """Every member of a standard topology family that can be built on ``n`` nodes.

    Every family except complete and null starts at n = 4: with a partition of
    one node (or the 3-cycle, which is the triangle) the structure loses its
    bridging. Equi-partite families therefore need parts of at least 2 nodes.
    """
    if topology == Topology.COMPLETE:
        return [standard("complete", n)] if n >= 2 else []
    if topology == Topology.NULL:
        return [empty(n)] if n >= 1 else []
    if topology == Topology.COMPLETE_BIPARTITE:
        return [turan(n)] if n >= 4 else []
    if topology == Topology.CYCLE:
        return [standard("cycle", n)] if n >= 4 else []
    if topology == Topology.COMPLETE_EQUI_TRIPARTITE:
        return [complete_multipartite([n // 3] * 3)] if n >= 6 and n % 3 == 0 else []
    if topology == Topology.COMPLETE_EQUI_K_PARTITE:
        return [complete_multipartite([n // k] * k) for k in range(3, n // 2 + 1) if n % k == 0]
    raise GraphError(f"Unknown topology {topology!r}")


def best_response(
    g: Graph, i: int, p: Params, rng: np.random.Generator, allow_indifferent_adds: bool = False
) -> Action:
    """Pick the payoff-maximizing single-link act of node ``i``.

    Deletions are unilateral; additions need the partner's gain to be non-negative.
    Nothing is done unless the best gain is positive, or zero for an addition when
    ``allow_indifferent_adds`` is set. Ties are broken uniformly with ``rng``.
    """
    table = _GainTable(g, p)
    candidates: List[Tuple[Payoff, ActionKind, int]] = []
    for j in range(g.n):
        if j == i:
            continue
        gain_i = table.gain(i, j)
        if g.has_edge(i, j):
            candidates.append((gain_i, ActionKind.DELETE_EDGE, j))
        elif table.gain(j, i) >= 0:
            candidates.append((gain_i, ActionKind.ADD_EDGE, j))

    if not candidates:
        return Action(ActionKind.PASS)

    best = max(gain for gain, _, _ in candidates)
    pool: Optional[List[Tuple[Payoff, ActionKind, int]]] = None
    if best > 0:
        pool = [c for c in candidates if c[0] == best]
    elif best == 0 and allow_indifferent_adds:
        pool = [c for c in candidates if c[0] == 0 and c[1] == ActionKind.ADD_EDGE]
    if not pool:
        return Action(ActionKind.PASS)

    gain, kind, target = pool[int(rng.integers(len(pool)))] if len(pool) > 1 else pool[0]
    return Action(kind, target, gain)
