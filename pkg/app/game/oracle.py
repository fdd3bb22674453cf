"""Exhaustive enumeration of every labeled graph on n <= 7 nodes.

Graph ``code`` bit p is the p-th pair of ``pair_list(n)``. For each chunk of
codes the parameter-free structure (adjacency, degrees, neighbor links, the
bridging change of every single-link toggle) is computed once with numpy and
then evaluated for any number of (delta, cost) cells. Utilities are compared as
integers: every bridging factor is scaled by L = lcm(1..n-2) and both delta - c
and delta^2 by their common denominator, so no comparison is rounded.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from app.config import get_oracle_chunk_size, get_oracle_max_nodes, get_progress, get_workers
from app.models import (
    Graph,
    GraphError,
    InvariantViolation,
    OracleLimitError,
    OracleResult,
    Params,
    PosKind,
    PosMethod,
    PosVerdict,
)
from app.models.graph import pair_list
from app.utils import format_rational

from .efficiency import triangle_lower_bound
from .stability import is_pairwise_stable

logger = logging.getLogger(__name__)

INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class _CellScale:
    """Integer form of one (delta, cost) cell: utilities are multiplied by ``denominator * L``."""

    link: int
    bridge: int
    denominator: int


@dataclass
class _CellPartial:
    stable_codes: np.ndarray
    stable_utilities: np.ndarray
    max_utility: int
    efficient_codes: np.ndarray


def bridge_scale(n: int) -> int:
    """lcm(1..n-2): every bridging factor times this is an integer."""
    return lcm(*range(1, max(n - 2, 1) + 1))


def _bridge_table(n: int, scale: int) -> np.ndarray:
    """scale * b(d, s) for d < n and s <= C(n-1, 2)."""
    max_links = comb(n - 1, 2)
    table = np.zeros((n, max_links + 1), dtype=np.int64)
    for d in range(2, n):
        for s in range(max_links + 1):
            table[d, s] = scale * d - (2 * s * scale) // (d - 1)
    return table


def _cell_scale(p: Params) -> _CellScale:
    x, y = p.net_link_value, p.bridge_value
    denominator = lcm(x.denominator, y.denominator)
    return _CellScale(int(x * denominator), int(y * denominator), denominator)


def check_limit(n: int, max_nodes: Optional[int] = None) -> int:
    limit = max_nodes if max_nodes is not None else get_oracle_max_nodes()
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"Graph size must be a positive integer, got {n!r}")
    if n > limit:
        raise OracleLimitError(f"Exhaustive enumeration is limited to {limit} nodes, got {n}")
    return n


def _structure(n: int, start: int, stop: int):
    """Parameter-free arrays for codes in [start, stop)."""
    pairs = pair_list(n)
    first = np.array([i for i, _ in pairs], dtype=np.intp)
    second = np.array([j for _, j in pairs], dtype=np.intp)
    codes = np.arange(start, stop, dtype=np.int64)
    count = len(codes)

    bits = ((codes[:, None] >> np.arange(len(pairs), dtype=np.int64)) & 1).astype(np.int64)
    adjacency = np.zeros((count, n, n), dtype=np.int64)
    adjacency[:, first, second] = bits
    adjacency[:, second, first] = bits

    degrees = adjacency.sum(axis=2)
    common = np.matmul(adjacency, adjacency)
    links = (adjacency * common).sum(axis=2) // 2

    scale = bridge_scale(n)
    table = _bridge_table(n, scale)
    sign = 1 - 2 * adjacency
    new_degrees = degrees[:, :, None] + sign
    new_links = links[:, :, None] + sign * common
    diagonal = np.arange(n)
    new_degrees[:, diagonal, diagonal] = degrees
    new_links[:, diagonal, diagonal] = links

    bridging = table[degrees, links]
    bridge_change = table[new_degrees, new_links] - bridging[:, :, None]
    return codes, adjacency.astype(bool), sign, bridge_change, bits.sum(axis=1), bridging.sum(axis=1), links, scale


def _evaluate_chunk(n: int, start: int, stop: int, cells: Sequence[_CellScale]) -> List[_CellPartial]:
    codes, adjacency, sign, bridge_change, edge_counts, bridging_sums, _, scale = _structure(n, start, stop)
    off_diagonal = ~np.eye(n, dtype=bool)[None, :, :]
    absent = ~adjacency & off_diagonal

    partials = []
    for cell in cells:
        magnitude = (abs(cell.link) + abs(cell.bridge)) * scale * (2 * n * n + 2)
        dtype = np.int64 if magnitude < INT64_SAFE else object
        link = cell.link * scale
        gains = sign.astype(dtype) * link + bridge_change.astype(dtype) * cell.bridge
        reverse = gains.transpose(0, 2, 1)

        drop = (adjacency & (gains > 0)).any(axis=(1, 2))
        add = (absent & (gains > 0) & (reverse >= 0)).any(axis=(1, 2))
        stable = ~(drop | add)

        utilities = edge_counts.astype(dtype) * (2 * link) + bridging_sums.astype(dtype) * cell.bridge
        best = utilities.max()
        partials.append(
            _CellPartial(
                stable_codes=codes[stable],
                stable_utilities=utilities[stable],
                max_utility=int(best),
                efficient_codes=codes[utilities == best],
            )
        )
    return partials


def _chunks(n: int, chunk_size: int) -> List[Tuple[int, int]]:
    total = 1 << len(pair_list(n))
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def _run_chunks(
    n: int,
    cells: Sequence[_CellScale],
    workers: Optional[int],
    chunk_size: Optional[int],
    progress: Optional[bool] = None,
):
    chunk_size = chunk_size or get_oracle_chunk_size()
    chunks = _chunks(n, chunk_size)
    logger.debug(f"Enumerating {1 << len(pair_list(n))} graphs on {n} nodes in {len(chunks)} chunks")
    if len(chunks) == 1:
        return [_evaluate_chunk(n, chunks[0][0], chunks[0][1], cells)]
    workers = workers if workers is not None else get_workers()
    jobs = Parallel(n_jobs=workers or -1, return_as="generator")(
        delayed(_evaluate_chunk)(n, start, stop, cells) for start, stop in chunks
    )
    show = get_progress() if progress is None else progress
    return list(tqdm(jobs, total=len(chunks), desc=f"oracle n={n}", disable=not show))


def _merge(n: int, p: Params, cell: _CellScale, partials: Sequence[_CellPartial]) -> OracleResult:
    scale = cell.denominator * bridge_scale(n)
    stable_codes = np.concatenate([part.stable_codes for part in partials])
    stable_utilities = np.concatenate([part.stable_utilities for part in partials])
    best_all = max(part.max_utility for part in partials)
    efficient = np.concatenate([part.efficient_codes for part in partials if part.max_utility == best_all])

    max_utility = Fraction(best_all, scale)
    max_stable = Fraction(int(stable_utilities.max()), scale) if len(stable_codes) else None
    if max_utility == 0:
        pos = PosVerdict(PosKind.UNDEFINED, None, PosMethod.ORACLE, max_stable or Fraction(0), max_utility)
    else:
        best_stable = max_stable if max_stable is not None else Fraction(0)
        pos = PosVerdict(PosKind.EXACT, best_stable / max_utility, PosMethod.ORACLE, best_stable, max_utility)

    return OracleResult(
        n=n,
        params=p,
        visited=1 << len(pair_list(n)),
        stable_graphs=tuple(int(code) for code in stable_codes),
        max_stable_utility=max_stable,
        efficient_graphs=tuple(int(code) for code in efficient),
        max_utility=max_utility,
        pos=pos,
        stable_utilities=tuple(Fraction(int(u), scale) for u in stable_utilities),
    )


def enumerate_grid(
    n: int,
    params: Sequence[Params],
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    max_nodes: Optional[int] = None,
    progress: Optional[bool] = None,
) -> List[OracleResult]:
    """Enumerate all graphs on ``n`` nodes once and evaluate every parameter cell.

    Returns:
        List[OracleResult]: one result per entry of ``params``, in order
    """
    check_limit(n, max_nodes)
    cells = [_cell_scale(p) for p in params]
    per_chunk = _run_chunks(n, cells, workers, chunk_size, progress)
    return [
        _merge(n, p, cell, [chunk[index] for chunk in per_chunk]) for index, (p, cell) in enumerate(zip(params, cells))
    ]


def enumerate_graphs(
    n: int, p: Params, workers: Optional[int] = None, chunk_size: Optional[int] = None, max_nodes: Optional[int] = None
) -> OracleResult:
    """Stable set, efficient graphs and exact PoS over all 2^C(n,2) labeled graphs."""
    return enumerate_grid(n, [p], workers, chunk_size, max_nodes)[0]


def recertify(result: OracleResult) -> int:
    """Re-check every listed stable graph with the graph model's certification.

    Raises:
        InvariantViolation: a listed graph has a profitable deviation
    """
    for code in result.stable_graphs:
        report = is_pairwise_stable(Graph.from_code(result.n, code), result.params)
        if not report.stable:
            raise InvariantViolation(f"Oracle lists code={code:#x} on {result.n} nodes as stable: {report.witness}")
    return len(result.stable_graphs)


def check_extremal_bounds(n: int, max_nodes: Optional[int] = None) -> Tuple[int, int]:
    """Check the triangle-free edge bound and the triangle lower bound on every graph.

    Returns:
        Tuple[int, int]: (graphs visited, violations found)
    """
    check_limit(n, max_nodes)
    visited = 0
    violations = 0
    turan_edges = n * n // 4
    bounds = np.array([triangle_lower_bound(n, e) for e in range(comb(n, 2) + 1)], dtype=np.int64)
    for start, stop in _chunks(n, get_oracle_chunk_size()):
        codes, _, _, _, edge_counts, _, links, _ = _structure(n, start, stop)
        triangles = links.sum(axis=1) // 3
        over = edge_counts > turan_edges
        violations += int(((triangles == 0) & over).sum())
        violations += int((over & (triangles < bounds[edge_counts])).sum())
        visited += len(codes)
    if violations:
        logger.warning(f"{violations} graphs on {n} nodes violate the extremal bounds")
    return visited, violations


def format_dump(result: OracleResult) -> str:
    """Summary header plus one ``code=<hex> u=<rational>`` line per stable graph."""
    pos = result.pos
    pos_text = pos.kind.value if pos.value is None else f"{pos.kind.value}:{format_rational(pos.value)}"
    max_stable = "none" if result.max_stable_utility is None else format_rational(result.max_stable_utility)
    lines = [
        f"# n={result.n} delta={format_rational(result.params.delta)} cost={format_rational(result.params.cost)}",
        f"# visited={result.visited} stable={len(result.stable_graphs)} max_stable_u={max_stable} "
        f"max_u={format_rational(result.max_utility)} pos={pos_text}",
        "# efficient=" + ",".join(f"{code:#x}" for code in result.efficient_graphs),
    ]
    lines.extend(
        f"code={code:#x} u={format_rational(u)}" for code, u in zip(result.stable_graphs, result.stable_utilities)
    )
    return "\n".join(lines) + "\n"


def write_dump(result: OracleResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_dump(result))
    logger.info(f"Wrote {len(result.stable_graphs)} stable graphs to {path}")
