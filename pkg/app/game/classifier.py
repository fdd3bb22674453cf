"""Topology classification of final graphs.

Exact structural tests come first, then degree-vector matching against four ideal
structures (mean squared deviation below tau = tau_fraction * (n-1)^2), then the
greedy-coloring multipartite fallbacks.
"""

import logging
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from app.models import ClassifierConfig, Classification, ClassLabel, Coloring, Graph, GraphError

logger = logging.getLogger(__name__)

# Near-X label for each ideal structure, in tie-break order
NEAR_LABELS = {
    ClassLabel.NULL: ClassLabel.NEAR_NULL,
    ClassLabel.STAR: ClassLabel.NEAR_STAR,
    ClassLabel.SHARED: ClassLabel.NEAR_SHARED,
    ClassLabel.COMPLETE: ClassLabel.NEAR_COMPLETE,
}

STRUCTURAL_PRECEDENCE = (
    ClassLabel.NULL,
    ClassLabel.COMPLETE,
    ClassLabel.STAR,
    ClassLabel.TURAN,
    ClassLabel.BIPARTITE_COMPLETE,
    ClassLabel.EQUI_K_PARTITE_COMPLETE,
    ClassLabel.K_PARTITE_COMPLETE,
    ClassLabel.SHARED,
)
FALLBACK_PRECEDENCE = (ClassLabel.EQUI_K_PARTITE, ClassLabel.K_PARTITE)


def msd(observed: Sequence[int], ideal: Sequence[int]) -> Fraction:
    """Mean of squared componentwise differences between two degree vectors."""
    if len(observed) != len(ideal):
        raise GraphError(f"Degree vectors differ in length ({len(observed)} vs {len(ideal)})")
    if not observed:
        return Fraction(0)
    return Fraction(sum((a - b) ** 2 for a, b in zip(observed, ideal)), len(observed))


def ideal_shared_order(degrees: Sequence[int]) -> int:
    """Mean degree rounded half up."""
    if not degrees:
        raise GraphError("Degree vector is empty")
    return floor(Fraction(sum(degrees), len(degrees)) + Fraction(1, 2))


def ideal_vectors(degrees: Sequence[int]) -> Dict[ClassLabel, Tuple[int, ...]]:
    n = len(degrees)
    shared = ideal_shared_order(degrees)
    return {
        ClassLabel.NULL: (0,) * n,
        ClassLabel.STAR: (n - 1,) + (1,) * (n - 1),
        ClassLabel.SHARED: (shared,) * n,
        ClassLabel.COMPLETE: (n - 1,) * n,
    }


def _degree_order(graph: nx.Graph, colors) -> List[int]:
    return sorted(graph, key=lambda v: (-graph.degree(v), v))


def greedy_color(g: Graph) -> Coloring:
    """Greedy proper coloring visiting nodes by descending degree, ties by index."""
    colors = nx.greedy_color(g.to_networkx(), strategy=_degree_order)
    k = max(colors.values()) + 1
    classes = tuple(tuple(sorted(v for v, c in colors.items() if c == color)) for color in range(k))
    return Coloring(k, classes)


def _bipartition(g: Graph) -> Optional[Tuple[frozenset, frozenset]]:
    """Two-coloring of a connected bipartite graph, or None."""
    graph = g.to_networkx()
    if g.n < 2 or not nx.is_connected(graph) or not nx.is_bipartite(graph):
        return None
    left, right = nx.bipartite.sets(graph)
    return frozenset(left), frozenset(right)


def _is_complete_between(g: Graph, classes: Sequence[Sequence[int]]) -> bool:
    sizes = [len(c) for c in classes]
    cross_pairs = (sum(sizes) ** 2 - sum(s * s for s in sizes)) // 2
    # independent classes, so every edge is a cross edge
    return g.edge_count == cross_pairs


def structural_matches(g: Graph) -> Tuple[set, Coloring]:
    """Exact-structure labels (no degree-vector matching)."""
    n = g.n
    degrees = g.degrees()
    vector = g.sorted_degree_vector()
    matches = set()

    if g.edge_count == 0:
        matches.add(ClassLabel.NULL)
    if all(d == n - 1 for d in degrees):
        matches.add(ClassLabel.COMPLETE)
    if vector == (n - 1,) + (1,) * (n - 1):
        matches.add(ClassLabel.STAR)
    if degrees[0] >= 1 and len(set(degrees)) == 1:
        matches.add(ClassLabel.SHARED)

    split = _bipartition(g)
    if split is not None and _is_complete_between(g, split):
        matches.add(ClassLabel.BIPARTITE_COMPLETE)
        if abs(len(split[0]) - len(split[1])) <= 1:
            matches.add(ClassLabel.TURAN)

    coloring = greedy_color(g)
    if coloring.k >= 3:
        equal = len({len(c) for c in coloring.classes}) == 1
        matches.add(ClassLabel.K_PARTITE)
        if equal:
            matches.add(ClassLabel.EQUI_K_PARTITE)
        if _is_complete_between(g, coloring.classes):
            matches.add(ClassLabel.K_PARTITE_COMPLETE)
            if equal:
                matches.add(ClassLabel.EQUI_K_PARTITE_COMPLETE)
    return matches, coloring


def classify(g: Graph, cfg: Optional[ClassifierConfig] = None) -> Classification:
    """Primary label and every matching label of ``g``.

    Args:
        g: graph with at least 2 nodes
        cfg: classifier settings (threshold fraction)

    Returns:
        Classification: primary label, all matches, the MSD to each ideal and tau
    """
    if g.n < 2:
        raise GraphError("Classification needs at least 2 nodes")
    cfg = cfg or ClassifierConfig()
    tau = cfg.threshold(g.n)
    matches, coloring = structural_matches(g)

    vector = g.sorted_degree_vector()
    deviations = {label: msd(vector, ideal) for label, ideal in ideal_vectors(vector).items()}
    near = [
        NEAR_LABELS[label]
        for label, value in deviations.items()
        if label not in matches and value < tau
    ]
    matches.update(near)

    primary = next((label for label in STRUCTURAL_PRECEDENCE if label in matches), None)
    if primary is None and near:
        best = min(deviations[label] for label in NEAR_LABELS if NEAR_LABELS[label] in near)
        primary = next(
            NEAR_LABELS[label]
            for label in NEAR_LABELS
            if NEAR_LABELS[label] in near and deviations[label] == best
        )
    if primary is None:
        primary = next((label for label in FALLBACK_PRECEDENCE if label in matches), ClassLabel.UNCLASSIFIED)

    logger.debug(f"Classified graph with {g.edge_count} edges as {primary.value}")
    return Classification(primary, frozenset(matches), deviations, tau, coloring.k)
