"""Cross-check of the analytic stability, efficiency and PoS claims against the oracle.

Every grid cell yields one line per claim: PASS, FAIL (with a witness) or AUDIT
for conjectured statements, which are reported but never judged.
"""

import logging
from fractions import Fraction
from typing import List, Optional

from app.models import (
    Certainty,
    ClaimResult,
    ClaimStatus,
    Graph,
    OracleResult,
    Params,
    PosKind,
    PosVerdict,
    Topology,
)
from app.utils import format_rational

from .efficiency import efficient_graph
from .oracle import enumerate_grid
from .pos import grid_values, price_of_stability
from .stability import build_topologies, is_pairwise_stable, predicted_stable_topologies

logger = logging.getLogger(__name__)


def _stability_claims(p: Params, n: int, result: OracleResult, stable: set) -> List[ClaimResult]:
    claims = []
    prediction = predicted_stable_topologies(p)
    for topology in sorted(prediction.topologies, key=lambda t: list(Topology).index(t)):
        for graph in build_topologies(topology, n):
            name = f"stable:{topology.value}"
            if graph.code in stable:
                claims.append(ClaimResult(p.delta, p.cost, name, ClaimStatus.PASS, f"region {prediction.region_id}"))
                continue
            witness = is_pairwise_stable(graph, p).witness
            detail = f"region {prediction.region_id}: code={graph.code:#x} not stable"
            if witness is not None:
                detail += (
                    f"; {witness.kind.value} ({witness.i},{witness.j}) gains "
                    f"{format_rational(witness.gain_i)}/{format_rational(witness.gain_j)}"
                )
            claims.append(ClaimResult(p.delta, p.cost, name, ClaimStatus.FAIL, detail))
    return claims


def _efficiency_claim(p: Params, n: int, result: OracleResult) -> ClaimResult:
    verdict = efficient_graph(p, n)
    best = Graph.from_code(n, result.efficient_graphs[0])
    observed = f"max u={format_rational(result.max_utility)} at code={best.code:#x}"
    if verdict.certainty == Certainty.CONJECTURED:
        predicted = verdict.predicted.value if verdict.predicted else "tie"
        leader = verdict.candidates[0]
        status_text = "attains" if leader.utility == result.max_utility else "below"
        detail = f"predicted {predicted}; best candidate {leader.label.value} {status_text} {observed}"
        return ClaimResult(p.delta, p.cost, f"conjecture:{verdict.region}", ClaimStatus.AUDIT, detail)

    name = f"efficient:{verdict.label.value}"
    if verdict.utility == result.max_utility:
        return ClaimResult(p.delta, p.cost, name, ClaimStatus.PASS, verdict.region)
    detail = f"{verdict.region}: closed form u={format_rational(verdict.utility)} but {observed}"
    return ClaimResult(p.delta, p.cost, name, ClaimStatus.FAIL, detail)


def _verdict_text(verdict: PosVerdict) -> str:
    if verdict.value is None:
        return verdict.kind.value
    return f"{verdict.kind.value} {format_rational(verdict.value)}"


def _pos_claim(p: Params, n: int, result: OracleResult) -> ClaimResult:
    claimed = price_of_stability(p, n)
    actual = result.pos
    actual_text = _verdict_text(actual)
    name = f"pos:{claimed.region}"
    if not claimed.exhaustive and claimed.region != "lower-bound":
        return ClaimResult(p.delta, p.cost, name, ClaimStatus.AUDIT, f"oracle {actual_text}")

    if claimed.kind == PosKind.UNDEFINED:
        ok = actual.kind == PosKind.UNDEFINED
    elif claimed.kind == PosKind.EXACT:
        ok = actual.kind == PosKind.EXACT and actual.value == claimed.value
    else:
        ok = actual.kind == PosKind.EXACT and actual.value >= claimed.value
    claimed_text = _verdict_text(claimed)
    status = ClaimStatus.PASS if ok else ClaimStatus.FAIL
    return ClaimResult(p.delta, p.cost, name, status, f"claimed {claimed_text}; oracle {actual_text}")


def verify_predictions(
    n: int,
    grid_step: Fraction,
    workers: Optional[int] = None,
    max_nodes: Optional[int] = None,
    progress: Optional[bool] = None,
) -> List[ClaimResult]:
    """Check every analytic claim on the (delta, cost) grid step..1 against exhaustive search.

    Args:
        n: node count (within the oracle limit)
        grid_step: grid spacing; must divide 1 evenly
        workers: oracle worker processes
        max_nodes: enumeration limit override
        progress: show a progress bar (defaults to the configured setting)

    Returns:
        List[ClaimResult]: one entry per (cell, claim), row-major by delta then cost
    """
    values = grid_values(Fraction(grid_step), include_upper=True)
    cells = [Params(delta, cost, relaxed=True) for delta in values for cost in values]
    results = enumerate_grid(n, cells, workers=workers, max_nodes=max_nodes, progress=progress)

    report: List[ClaimResult] = []
    for p, result in zip(cells, results):
        stable = set(result.stable_graphs)
        report.extend(_stability_claims(p, n, result, stable))
        report.append(_efficiency_claim(p, n, result))
        report.append(_pos_claim(p, n, result))

    failures = [claim for claim in report if claim.status == ClaimStatus.FAIL]
    for claim in failures:
        logger.warning(f"n={n} delta={claim.delta} cost={claim.cost}: {claim.claim} failed ({claim.detail})")
    logger.info(f"Checked {len(report)} claims on {len(cells)} cells for n={n}: {len(failures)} failed")
    return report
