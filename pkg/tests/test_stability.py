"""
Pairwise stability tests.

This module covers:
- Certification with deviation witnesses
- Region predictions for the standard topologies
- The complete equi-k-partite margin
- The best-response rule
"""

from fractions import Fraction

import numpy as np
import pytest

from app.game.stability import (
    best_response,
    build_topologies,
    equipartite_margin,
    is_pairwise_stable,
    predicted_stable_topologies,
)
from app.game.pos import grid_values
from app.models import ActionKind, DeviationKind, GraphError, Params, Topology
from app.models.graph import complete_multipartite, empty, standard, turan


class TestCertification:
    """Test is_pairwise_stable."""

    def test_complete_stable_when_links_pay(self):
        """K5 is stable for delta > c."""
        assert is_pairwise_stable(standard("complete", 5), Params("1/2", "1/10")).stable

    def test_null_stable_when_links_cost(self):
        """The null graph is stable for delta < c."""
        assert is_pairwise_stable(empty(5), Params("1/10", "1/2")).stable

    def test_null_unstable_when_links_pay(self):
        """A profitable mutual addition is reported for the first pair."""
        report = is_pairwise_stable(empty(4), Params("1/2", "1/10"))
        assert not report.stable
        assert report.witness.kind == DeviationKind.ADD_EDGE
        assert (report.witness.i, report.witness.j) == (0, 1)

    def test_cycle_deletion_witness(self):
        """cycle(6) at delta=2/5, c=9/10 fails on dropping (0, 1)."""
        report = is_pairwise_stable(standard("cycle", 6), Params("2/5", "9/10"))
        assert not report.stable
        assert report.witness.kind == DeviationKind.DELETE_EDGE
        assert (report.witness.i, report.witness.j) == (0, 1)
        assert report.witness.gain_i == Fraction(9, 50)

    def test_star_leaves_link_up(self, params):
        """Two star leaves both gain x from linking to each other."""
        report = is_pairwise_stable(standard("star", 6), params)
        assert report.witness.kind == DeviationKind.ADD_EDGE
        assert (report.witness.i, report.witness.j) == (1, 2)
        assert report.witness.gain_i == report.witness.gain_j == params.net_link_value

    def test_cycle_stable_in_cycle_region(self):
        """cycle(6) is stable when delta^2 <= c - delta <= 2 delta^2."""
        assert is_pairwise_stable(standard("cycle", 6), Params("1/2", "4/5")).stable

    @pytest.mark.parametrize(
        "delta, cost, stable",
        [
            ("1/2", "1/2", True),
            ("1/2", "3/10", True),
            ("1/2", "7/10", True),
            ("9/10", "1/20", False),
            ("1/2", "4/5", False),
        ],
    )
    def test_complete_bipartite_condition(self, delta, cost, stable):
        """K(3,3) is stable exactly when |delta - c| <= delta^2."""
        assert is_pairwise_stable(turan(6), Params(delta, cost)).stable is stable


class TestEquipartiteMargin:
    """Test the complete equi-k-partite stability margin."""

    def test_margin_values(self):
        """(a-1)/((k-1)a - 1)."""
        assert equipartite_margin(2) == Fraction(1, 3)
        assert equipartite_margin(3) == Fraction(2, 5)
        assert equipartite_margin(2, parts=4) == Fraction(1, 5)
        assert equipartite_margin(3, parts=2) == 1
        with pytest.raises(GraphError):
            equipartite_margin(1)

    @pytest.mark.parametrize("sizes", [[2, 2, 2], [3, 3, 3], [2, 2, 2, 2], [3, 3]])
    def test_margin_is_exact(self, sizes):
        """Stable at |x| = margin * y, unstable just beyond, on both sides of delta = c."""
        margin = equipartite_margin(sizes[0], parts=len(sizes))
        g = complete_multipartite(sizes)
        delta = Fraction(1, 2)
        y = delta * delta
        edge = margin * y
        for sign in (1, -1):
            assert is_pairwise_stable(g, Params(delta, delta - sign * edge)).stable
            assert not is_pairwise_stable(g, Params(delta, delta - sign * (edge + Fraction(1, 100)))).stable

    def test_tripartite_row_is_looser_than_the_margin(self):
        """At delta=1/2, c=2/5 the tripartite row predicts K(2,2,2) stable, but it is not."""
        p = Params("1/2", "2/5")
        assert Topology.COMPLETE_EQUI_TRIPARTITE in predicted_stable_topologies(p).topologies
        assert not is_pairwise_stable(complete_multipartite([2, 2, 2]), p).stable


class TestRegions:
    """Test predicted_stable_topologies."""

    @pytest.mark.parametrize(
        "delta, cost, region, topologies",
        [
            ("1/2", "1/2", "2", {"Complete", "Null", "CompleteBipartite", "CompleteEquiKPartite"}),
            ("1/2", "1/10", "1a", {"Complete"}),
            ("1/2", "3/10", "1b", {"Complete", "CompleteBipartite"}),
            ("9/10", "1/2", "1c", {"Complete", "CompleteBipartite", "CompleteEquiTripartite"}),
            ("1/10", "1/2", "3a", {"Null"}),
            ("1/2", "7/10", "3b", {"Null", "CompleteBipartite"}),
            ("1/2", "4/5", "3c", {"Null", "Cycle"}),
            ("9/10", "19/20", "3d", {"Null", "CompleteBipartite", "CompleteEquiTripartite"}),
        ],
    )
    def test_regions(self, delta, cost, region, topologies):
        """Region ids and the union of predicted topologies."""
        prediction = predicted_stable_topologies(Params(delta, cost, relaxed=True))
        assert prediction.region_id == region
        assert {t.value for t in prediction.topologies} == topologies

    def test_boundary_between_bipartite_and_cycle(self):
        """At c - delta = delta^2 both bipartite and cycle rows apply."""
        prediction = predicted_stable_topologies(Params("1/2", "3/4"))
        assert {Topology.COMPLETE_BIPARTITE, Topology.CYCLE} <= prediction.topologies


class TestBuildTopologies:
    """Test the standard topology builder."""

    def test_families(self):
        """Constructible members per family."""
        assert build_topologies(Topology.COMPLETE_BIPARTITE, 3) == []
        assert build_topologies(Topology.COMPLETE_BIPARTITE, 6) == [turan(6)]
        assert build_topologies(Topology.CYCLE, 4) == [standard("cycle", 4)]
        assert build_topologies(Topology.COMPLETE_EQUI_TRIPARTITE, 3) == []
        assert build_topologies(Topology.COMPLETE_EQUI_TRIPARTITE, 4) == []
        assert build_topologies(Topology.COMPLETE_EQUI_TRIPARTITE, 6) == [complete_multipartite([2, 2, 2])]
        equi = build_topologies(Topology.COMPLETE_EQUI_K_PARTITE, 6)
        assert equi == [complete_multipartite([2, 2, 2])]
        equi = build_topologies(Topology.COMPLETE_EQUI_K_PARTITE, 12)
        assert equi == [complete_multipartite([4] * 3), complete_multipartite([3] * 4), complete_multipartite([2] * 6)]


class TestBestResponse:
    """Test the single-link best-response rule."""

    def test_leaf_links_to_another_leaf(self, params):
        """A star leaf adds a link to one of the other leaves."""
        action = best_response(standard("star", 4), 1, params, np.random.default_rng(0))
        assert action.kind == ActionKind.ADD_EDGE
        assert action.target in (2, 3)
        assert action.gain == params.net_link_value

    def test_hub_passes(self, params):
        """Dropping any spoke would hurt the hub."""
        assert best_response(standard("star", 4), 0, params, np.random.default_rng(0)).kind == ActionKind.PASS

    def test_deletion_is_unilateral(self):
        """A cycle node drops a link when it pays, whatever the partner thinks."""
        action = best_response(standard("cycle", 6), 0, Params("2/5", "9/10"), np.random.default_rng(0))
        assert action.kind == ActionKind.DELETE_EDGE
        assert action.target in (1, 5)

    def test_indifferent_additions(self):
        """Zero-gain additions only happen when allowed."""
        p = Params("1/2", "1/2")
        rng = np.random.default_rng(0)
        assert best_response(empty(3), 0, p, rng).kind == ActionKind.PASS
        action = best_response(empty(3), 0, p, rng, allow_indifferent_adds=True)
        assert action.kind == ActionKind.ADD_EDGE
        assert action.gain == 0

    def test_fixed_point_is_stability(self, params):
        """Every node passes exactly when the graph is pairwise stable."""
        rng = np.random.default_rng(3)
        for g in (turan(6), standard("star", 5), standard("complete", 5), standard("cycle", 6)):
            all_pass = all(best_response(g, i, params, rng).kind == ActionKind.PASS for i in range(g.n))
            assert all_pass == is_pairwise_stable(g, params).stable


def whole_grid():
    """Every (delta, cost) on the 1/20 grid, endpoints 1 included."""
    values = grid_values(Fraction(1, 20), include_upper=True)
    return [Params(delta, cost, relaxed=True) for delta in values for cost in values]


class TestGridCertification:
    """Test the region table and its converses on the whole grid."""

    def test_predicted_topologies_are_stable(self):
        """Every predicted complete, null, bipartite, cycle and equi-k-partite graph certifies."""
        members = {
            Topology.COMPLETE: [standard("complete", 6)],
            Topology.NULL: [empty(6)],
            Topology.COMPLETE_BIPARTITE: [complete_multipartite([3, 3]), complete_multipartite([6, 4])],
            Topology.CYCLE: [standard("cycle", 6)],
            Topology.COMPLETE_EQUI_K_PARTITE: [complete_multipartite([4] * 3), complete_multipartite([3] * 4)],
        }
        for p in whole_grid():
            for topology in predicted_stable_topologies(p).topologies:
                for g in members.get(topology, []):
                    assert is_pairwise_stable(g, p).stable, (topology, p.delta, p.cost)

    @pytest.mark.parametrize("sizes", [[4, 4, 4], [3, 3, 3, 3]])
    def test_equi_partite_stability_follows_margin(self, sizes):
        """On twelve nodes K(4,4,4) and K(3,3,3,3) are stable exactly when |x| <= margin * y."""
        g = complete_multipartite(sizes)
        margin = equipartite_margin(sizes[0], parts=len(sizes))
        for p in whole_grid():
            expected = abs(p.net_link_value) <= margin * p.bridge_value
            assert is_pairwise_stable(g, p).stable is expected, (p.delta, p.cost)

    def test_bipartite_converse(self):
        """K(3,3) fails by a same-side addition above x = y and by a drop below x = -y."""
        g = complete_multipartite([3, 3])
        for p in whole_grid():
            x, y = p.net_link_value, p.bridge_value
            report = is_pairwise_stable(g, p)
            if x > y:
                assert report.witness.kind == DeviationKind.ADD_EDGE, (p.delta, p.cost)
            elif -x > y:
                assert report.witness.kind == DeviationKind.DELETE_EDGE, (p.delta, p.cost)
            else:
                assert report.stable, (p.delta, p.cost)

    def test_cycle_converse(self):
        """cycle(6) adds a chord when (c - delta)/delta^2 < 1 and drops a link above 2."""
        g = standard("cycle", 6)
        for p in whole_grid():
            ratio = -p.net_link_value / p.bridge_value
            report = is_pairwise_stable(g, p)
            if ratio < 1:
                assert report.witness.kind == DeviationKind.ADD_EDGE, (p.delta, p.cost)
            elif ratio > 2:
                assert report.witness.kind == DeviationKind.DELETE_EDGE, (p.delta, p.cost)
            else:
                assert report.stable, (p.delta, p.cost)
