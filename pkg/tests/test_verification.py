"""
Claim verification tests: analytic predictions checked against exhaustive search.
"""

from fractions import Fraction

import pytest

from app.game.verification import verify_predictions
from app.models import ClaimStatus, ParamsError

PROVEN_STABILITY_CLAIMS = {
    "stable:Complete",
    "stable:Null",
    "stable:CompleteBipartite",
    "stable:Cycle",
    "stable:CompleteEquiKPartite",
}


@pytest.fixture(scope="module")
def six_node_report():
    return verify_predictions(6, Fraction(1, 10), workers=1)


class TestVerifyPredictions:
    """Test verify_predictions."""

    def test_small_grid_passes(self):
        """On four nodes with step 1/2 nothing fails."""
        report = verify_predictions(4, Fraction(1, 2), workers=1)
        assert report
        assert all(claim.status != ClaimStatus.FAIL for claim in report)
        assert {claim.delta for claim in report} == {Fraction(1, 2), Fraction(1)}

    def test_proven_stability_rows_hold(self, six_node_report):
        """Complete, null, bipartite, cycle and equi-k-partite predictions all certify."""
        checked = [claim for claim in six_node_report if claim.claim in PROVEN_STABILITY_CLAIMS]
        assert checked
        assert all(claim.status == ClaimStatus.PASS for claim in checked)

    def test_tripartite_row_fails_inside_its_band(self, six_node_report):
        """K(2,2,2) is predicted stable at delta=1/2, c=2/5 but drops a link."""
        failures = [
            claim
            for claim in six_node_report
            if claim.status == ClaimStatus.FAIL
            and claim.claim == "stable:CompleteEquiTripartite"
            and (claim.delta, claim.cost) == (Fraction(1, 2), Fraction(2, 5))
        ]
        assert len(failures) == 1
        assert "not stable" in failures[0].detail

    def test_conjectures_are_audited(self, six_node_report):
        """Conjectured efficiency claims are reported, never judged."""
        conjectures = [claim for claim in six_node_report if claim.claim.startswith("conjecture:")]
        assert conjectures
        assert all(claim.status == ClaimStatus.AUDIT for claim in conjectures)

    def test_bad_step(self):
        """The grid step must divide 1."""
        with pytest.raises(ParamsError):
            verify_predictions(4, Fraction(3, 10))


class TestFineGrid:
    """Test verify_predictions on the 1/20 grid for small node counts."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_only_the_tripartite_row_fails(self, n):
        """Efficiency and PoS claims are judged and hold; only K(2,2,2) on six nodes may fail."""
        report = verify_predictions(n, Fraction(1, 20), workers=1)
        assert len({(claim.delta, claim.cost) for claim in report}) == 400

        failures = [claim for claim in report if claim.status == ClaimStatus.FAIL]
        if n < 6:
            assert failures == []
        assert all(claim.claim == "stable:CompleteEquiTripartite" for claim in failures)

        judged = [
            claim
            for claim in report
            if claim.claim.startswith(("efficient:", "pos:")) and claim.status != ClaimStatus.AUDIT
        ]
        assert judged
        assert all(claim.status == ClaimStatus.PASS for claim in judged)

    def test_three_nodes_have_no_partition_claims(self):
        """On three nodes only the complete and null rows can be built."""
        report = verify_predictions(3, Fraction(1, 20), workers=1)
        stability = {claim.claim for claim in report if claim.claim.startswith("stable:")}
        assert stability == {"stable:Complete", "stable:Null"}
