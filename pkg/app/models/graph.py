"""Undirected simple labeled graphs on nodes 0..n-1.

Adjacency is stored as one integer bitmask per node, so degree, links among
neighbors and common-neighbor counts are popcounts. Graph values are immutable:
``with_edge``/``without_edge``/``toggled`` return new graphs.
"""

import hashlib
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, floor
from typing import Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import GraphError, ParamsError

logger = logging.getLogger(__name__)

STATE_KEY_BYTES = 16
STANDARD_KINDS = ("complete", "star", "cycle", "wheel")
MIN_STANDARD_SIZE = {"complete": 2, "star": 2, "cycle": 3, "wheel": 4}

Edge = Tuple[int, int]


@lru_cache(maxsize=None)
def pair_list(n: int) -> Tuple[Edge, ...]:
    """All unordered node pairs (i, j), i < j, in lexicographic order.

    The position of a pair in this tuple is its bit in an edge-set code.
    """
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def pair_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


class Graph:
    """Immutable undirected simple graph with bitmask adjacency."""

    __slots__ = ("_n", "_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
            raise GraphError(f"Graph size must be a positive integer, got {n!r}")
        n = int(n)
        adj = [0] * n
        for edge in edges:
            i, j = (int(v) for v in edge)
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"Edge ({i}, {j}) references a node outside [0, {n})")
            if i == j:
                raise GraphError(f"Self-loop on node {i} is not allowed")
            if adj[i] >> j & 1:
                raise GraphError(f"Duplicate edge ({min(i, j)}, {max(i, j)})")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self._n = n
        self._adj = tuple(adj)

    @classmethod
    def _from_adjacency(cls, adj: Sequence[int]) -> "Graph":
        graph = cls.__new__(cls)
        graph._n = len(adj)
        graph._adj = tuple(adj)
        return graph

    @classmethod
    def from_code(cls, n: int, code: int) -> "Graph":
        """Build the graph whose edge set is the bitmask ``code`` over ``pair_list(n)``."""
        pairs = pair_list(n)
        if code < 0 or code >> len(pairs):
            raise GraphError(f"Code {code:#x} does not describe a graph on {n} nodes")
        adj = [0] * n
        for bit, (i, j) in enumerate(pairs):
            if code >> bit & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        return cls._from_adjacency(adj)

    # Structure

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> List[Edge]:
        """Edges as sorted (i, j) pairs with i < j."""
        return [(i, j) for i in range(self._n) for j in range(i + 1, self._n) if self._adj[i] >> j & 1]

    @property
    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self._adj) // 2

    @property
    def code(self) -> int:
        """Edge-set bitmask over ``pair_list(n)``."""
        value = 0
        for bit, (i, j) in enumerate(pair_list(self._n)):
            if self._adj[i] >> j & 1:
                value |= 1 << bit
        return value

    def _check_node(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self._n:
            raise GraphError(f"Node {i!r} is outside [0, {self._n})")
        return int(i)

    def adjacency_mask(self, i: int) -> int:
        return self._adj[self._check_node(i)]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[self._check_node(i)] >> self._check_node(j) & 1)

    def neighbors(self, i: int) -> Tuple[int, ...]:
        mask = self._adj[self._check_node(i)]
        return tuple(j for j in range(self._n) if mask >> j & 1)

    def degree(self, i: int) -> int:
        return self._adj[self._check_node(i)].bit_count()

    def degrees(self) -> Tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self._adj)

    def sigma(self, i: int) -> int:
        """Number of edges between neighbors of ``i``."""
        mask = self._adj[self._check_node(i)]
        total = 0
        j = 0
        rest = mask
        while rest:
            if rest & 1:
                total += (self._adj[j] & mask).bit_count()
            rest >>= 1
            j += 1
        return total // 2

    def common_neighbors(self, i: int, j: int) -> int:
        return (self._adj[self._check_node(i)] & self._adj[self._check_node(j)]).bit_count()

    def triangle_count(self) -> int:
        return sum(self.sigma(i) for i in range(self._n)) // 3

    def connected_triples(self) -> int:
        """Paths of length two, counted once per centre node and neighbor pair."""
        return sum(comb(d, 2) for d in self.degrees())

    def clustering_coefficient(self) -> Fraction:
        """Global transitivity 3T / connected triples; 0 when there is no connected triple."""
        triples = self.connected_triples()
        if triples == 0:
            return Fraction(0)
        return Fraction(3 * self.triangle_count(), triples)

    def sorted_degree_vector(self) -> Tuple[int, ...]:
        return tuple(sorted(self.degrees(), reverse=True))

    def canonical_state_key(self) -> bytes:
        """Fixed-size digest of the labeled edge set."""
        length = max(1, (len(pair_list(self._n)) + 7) // 8)
        payload = self._n.to_bytes(2, "big") + self.code.to_bytes(length, "big")
        return hashlib.blake2b(payload, digest_size=STATE_KEY_BYTES).digest()

    # Derived graphs

    def toggled(self, i: int, j: int) -> "Graph":
        i, j = self._check_node(i), self._check_node(j)
        if i == j:
            raise GraphError(f"Self-loop on node {i} is not allowed")
        adj = list(self._adj)
        adj[i] ^= 1 << j
        adj[j] ^= 1 << i
        return Graph._from_adjacency(adj)

    def with_edge(self, i: int, j: int) -> "Graph":
        if self.has_edge(i, j):
            raise GraphError(f"Edge ({i}, {j}) already present")
        return self.toggled(i, j)

    def without_edge(self, i: int, j: int) -> "Graph":
        if not self.has_edge(i, j):
            raise GraphError(f"Edge ({i}, {j}) not present")
        return self.toggled(i, j)

    # Conversions

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self.edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        n = graph.number_of_nodes()
        if set(graph.nodes) != set(range(n)):
            raise GraphError("networkx graph nodes must be labeled 0..n-1")
        return cls(n, graph.edges())

    def to_edge_list(self) -> str:
        edges = self.edges
        lines = [f"n {self._n}", *(f"{i} {j}" for i, j in edges)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse the edge-list text format: ``n <count>`` then one ``i j`` pair per line."""
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise GraphError("Edge list is empty")
        header = lines[0].split()
        if len(header) != 2 or header[0] != "n":
            raise GraphError(f"Edge list header must be 'n <count>', got {lines[0]!r}")
        try:
            n = int(header[1])
        except ValueError:
            raise GraphError(f"Node count {header[1]!r} is not an integer")
        edges = []
        for number, line in enumerate(lines[1:], start=2):
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"Line {number}: expected 'i j', got {line!r}")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise GraphError(f"Line {number}: node ids must be integers, got {line!r}")
        return cls(n, edges)

    # Value semantics

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.edges})"


# Constructors


def empty(n: int) -> Graph:
    """Null network on ``n`` nodes."""
    return Graph(n)


def standard(kind: str, n: int) -> Graph:
    """Complete, star (hub 0), cycle or wheel (hub 0 plus a cycle on 1..n-1) on ``n`` nodes."""
    kind = str(kind).lower()
    if kind not in STANDARD_KINDS:
        raise GraphError(f"Unknown topology {kind!r}; expected one of {', '.join(STANDARD_KINDS)}")
    if not isinstance(n, int) or n < MIN_STANDARD_SIZE[kind]:
        raise GraphError(f"A {kind} graph needs at least {MIN_STANDARD_SIZE[kind]} nodes, got {n!r}")
    if kind == "complete":
        return Graph.from_networkx(nx.complete_graph(n))
    if kind == "star":
        return Graph.from_networkx(nx.star_graph(n - 1))
    if kind == "cycle":
        return Graph.from_networkx(nx.cycle_graph(n))
    return Graph.from_networkx(nx.wheel_graph(n))


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph with consecutive node blocks of the given sizes."""
    sizes = list(sizes)
    if not sizes:
        raise GraphError("A multipartite graph needs at least one partition")
    if any(not isinstance(size, int) or size < 1 for size in sizes):
        raise GraphError(f"Partition sizes must be positive integers, got {sizes}")
    return Graph.from_networkx(nx.complete_multipartite_graph(*sizes))


def turan(n: int) -> Graph:
    """Complete bipartite graph with partitions of sizes ceil(n/2) and floor(n/2)."""
    if not isinstance(n, int) or n < 2:
        raise GraphError(f"A Turan graph needs at least 2 nodes, got {n!r}")
    return complete_multipartite([(n + 1) // 2, n // 2])


def density_edge_count(n: int, density: Fraction) -> int:
    """round-half-up(density * C(n, 2))."""
    return floor(Fraction(density) * comb(n, 2) + Fraction(1, 2))


def random_graph(n: int, density, rng: np.random.Generator) -> Graph:
    """Uniformly random graph with exactly round-half-up(density * C(n,2)) edges."""
    density = Fraction(density)
    if not 0 <= density <= 1:
        raise ParamsError(f"Density must lie in [0, 1], got {density}")
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"Graph size must be a positive integer, got {n!r}")
    pairs = pair_list(n)
    count = density_edge_count(n, density)
    if count == 0:
        return Graph(n)
    chosen = np.sort(rng.choice(len(pairs), size=count, replace=False))
    return Graph(n, (pairs[index] for index in chosen))


# Functional aliases


def degree(g: Graph, i: int) -> int:
    return g.degree(i)


def sigma(g: Graph, i: int) -> int:
    return g.sigma(i)


def triangle_count(g: Graph) -> int:
    return g.triangle_count()


def clustering_coefficient(g: Graph) -> Fraction:
    return g.clustering_coefficient()


def sorted_degree_vector(g: Graph) -> Tuple[int, ...]:
    return g.sorted_degree_vector()


def canonical_state_key(g: Graph) -> bytes:
    return g.canonical_state_key()


def read_edge_list(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return Graph.from_edge_list(f.read())


def write_edge_list(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(g.to_edge_list())
    logger.debug(f"Wrote graph with {g.edge_count} edges to {path}")
