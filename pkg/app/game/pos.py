"""Price of stability: utility of the best pairwise stable network over the efficient one."""

import logging
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional, Tuple

from app.models import Params, ParamsError, PosKind, PosMethod, PosVerdict, Topology
from app.models.graph import standard, turan

from .efficiency import REGION_MIN_NODES
from .payoff import total_utility
from .stability import build_topologies, is_pairwise_stable

logger = logging.getLogger(__name__)


def lower_bound(n: int) -> Fraction:
    """1/2 + 1/(2n), the guaranteed ratio when x <= y < 3x."""
    return Fraction(1, 2) + Fraction(1, 2 * n)


def pos_region(p: Params) -> str:
    x, y = p.net_link_value, p.bridge_value
    if x < 0:
        return "undefined" if y <= -x else "exact-below-cost"
    if x == 0:
        return "exact-equal"
    if x > 2 * y:
        return "exact-complete"
    if y >= 3 * x:
        return "exact-bridging"
    if x <= y:
        return "lower-bound"
    return "unresolved"


def best_constructible_stable(p: Params, n: int) -> Fraction:
    """Highest utility among standard topologies on ``n`` nodes that certify as stable."""
    best = Fraction(0)
    for topology in Topology:
        for graph in build_topologies(topology, n):
            if is_pairwise_stable(graph, p).stable:
                best = max(best, total_utility(graph, p))
    return best


def _closed_form(p: Params, n: int) -> PosVerdict:
    region = pos_region(p)
    x, y = p.net_link_value, p.bridge_value
    if region == "undefined":
        return PosVerdict(PosKind.UNDEFINED, None, PosMethod.CLOSED_FORM, Fraction(0), Fraction(0), region)
    if region.startswith("exact"):
        graph = standard("complete", n) if region == "exact-complete" else turan(n)
        utility = total_utility(graph, p)
        return PosVerdict(PosKind.EXACT, Fraction(1), PosMethod.CLOSED_FORM, utility, utility, region)

    # no efficient graph is known here; divide by the bound (x + y) n (n - 1)
    ceiling = (x + y) * n * (n - 1)
    if region == "lower-bound":
        return PosVerdict(
            PosKind.LOWER_BOUND,
            lower_bound(n),
            PosMethod.CLOSED_FORM,
            total_utility(turan(n), p),
            ceiling,
            region,
            exhaustive=False,
        )
    best = best_constructible_stable(p, n)
    return PosVerdict(
        PosKind.LOWER_BOUND, best / ceiling, PosMethod.CLOSED_FORM, best, ceiling, region, exhaustive=False
    )


def price_of_stability(
    p: Params, n: int, method: PosMethod = PosMethod.CLOSED_FORM, max_nodes: Optional[int] = None
) -> PosVerdict:
    """PoS at (delta, cost) on ``n`` nodes.

    Args:
        p: link parameters
        n: node count (>= 2)
        method: closed_form (regions and bounds) or oracle (exhaustive, small n); below 4 nodes
            both enumerate every graph
        max_nodes: enumeration limit override for the oracle method

    Returns:
        PosVerdict: Exact, LowerBound or Undefined with the utilities it is based on
    """
    if n < 2:
        raise ParamsError(f"PoS needs at least 2 nodes, got {n}")
    method = PosMethod(method)
    if method == PosMethod.CLOSED_FORM and n >= REGION_MIN_NODES:
        return _closed_form(p, n)

    from .oracle import enumerate_graphs

    if n < REGION_MIN_NODES:
        # the regions need n >= 4; at most 8 graphs to enumerate here
        return replace(enumerate_graphs(n, p, max_nodes=n).pos, region="small-n")
    return replace(enumerate_graphs(n, p, max_nodes=max_nodes).pos, region=pos_region(p))


def grid_values(step: Fraction, include_upper: bool = False) -> List[Fraction]:
    """step, 2 step, ... below 1 (or up to 1 inclusive)."""
    step = Fraction(step)
    if step <= 0 or step > 1 or (1 / step).denominator != 1:
        raise ParamsError(f"Grid step must divide 1 evenly, got {step}")
    count = int(1 / step)
    last = count if include_upper else count - 1
    return [k * step for k in range(1, last + 1)]


def pos_grid(
    n: int, step: Fraction, method: PosMethod = PosMethod.CLOSED_FORM, max_nodes: Optional[int] = None
) -> List[Tuple[Fraction, Fraction, PosVerdict]]:
    """PoS at every interior grid point, row-major by delta then cost."""
    values = grid_values(step)
    cells = [Params(delta, cost) for delta in values for cost in values]
    method = PosMethod(method)
    if method == PosMethod.ORACLE:
        from .oracle import enumerate_grid

        results = enumerate_grid(n, cells, max_nodes=max_nodes)
        verdicts = [replace(r.pos, region=pos_region(r.params)) for r in results]
    else:
        verdicts = [price_of_stability(p, n, method) for p in cells]
    logger.debug(f"Evaluated PoS on {len(cells)} cells for n={n} ({method.value})")
    return [(p.delta, p.cost, verdict) for p, verdict in zip(cells, verdicts)]
