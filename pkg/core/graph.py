"""
Graph core
Immutable simple graphs over dense vertex ids with bit-set adjacency,
plus the derived-graph operations (line graph, powers, contraction)
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.errors import InputError, InvariantViolation
from utils.helpers import get_log_level, iter_bits, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

MATCHING_KINDS = ('plain', 'induced', 'crossing-induced')


def _normalize(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph with vertices 0..n-1

    Edges are stored normalized (u < v) in insertion order; that order
    fixes the edge indices used by line graphs and edge decompositions.
    """

    n: int
    edges: Tuple[Edge, ...] = ()
    labels: Optional[Tuple[Any, ...]] = None

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        normalized = []
        seen = set()
        for raw in self.edges:
            if len(raw) != 2:
                raise InputError(f"edge {raw!r} must have exactly two endpoints")
            u, v = int(raw[0]), int(raw[1])
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) references a vertex outside 0..{self.n - 1}")
            e = _normalize(u, v)
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen.add(e)
            normalized.append(e)
        object.__setattr__(self, 'edges', tuple(normalized))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n:
                raise InputError(f"expected {self.n} labels, got {len(labels)}")
            object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   labels: Optional[Sequence[Any]] = None) -> 'Graph':
        return cls(n, tuple(tuple(e) for e in edges), None if labels is None else tuple(labels))

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph) -> 'Graph':
        """Relabel the nodes of a networkx graph densely in sorted order"""
        try:
            nodes = sorted(nx_graph.nodes())
        except TypeError:
            nodes = list(nx_graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = sorted(_normalize(index[u], index[v]) for u, v in nx_graph.edges() if u != v)
        labels = tuple(nodes) if any(node != i for i, node in enumerate(nodes)) else None
        return cls(len(nodes), tuple(edges), labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def adjacency(self) -> Tuple[int, ...]:
        """Open neighbourhood of every vertex as a bit mask"""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])

    def index_of(self, u: int, v: int) -> int:
        """Edge index of uv; raises InputError for a non-edge"""
        try:
            return self.edge_index[_normalize(u, v)]
        except KeyError:
            raise InputError(f"({u}, {v}) is not an edge")

    def label(self, v: int) -> Any:
        return v if self.labels is None else self.labels[v]

    def is_independent(self, mask: int) -> bool:
        for v in iter_bits(mask):
            if self.adjacency[v] & mask:
                return False
        return True

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.n))
        nx_graph.add_edges_from(self.edges)
        return nx_graph

    def same_structure(self, other: 'Graph') -> bool:
        """Equal vertex count and edge set, ignoring edge order and labels"""
        return self.n == other.n and set(self.edges) == set(other.edges)


@dataclass(frozen=True)
class Matching:
    """
    Set of vertex-disjoint edges with a kind tag

    kind 'plain' is an ordinary matching. 'induced' with no witness cut is
    induced in the whole graph; 'induced' with a witness cut is induced in
    the bipartite graph of edges crossing that cut. 'crossing-induced' is
    induced in the whole graph and crosses the witness cut.
    """

    edges: Tuple[Edge, ...]
    kind: str = 'plain'
    witness_cut: Optional[FrozenSet[int]] = field(default=None)

    def __post_init__(self):
        if self.kind not in MATCHING_KINDS:
            raise InputError(f"unknown matching kind {self.kind!r}")
        object.__setattr__(self, 'edges', tuple(sorted(_normalize(u, v) for u, v in self.edges)))
        if self.witness_cut is not None:
            object.__setattr__(self, 'witness_cut', frozenset(self.witness_cut))
        if self.kind == 'crossing-induced' and self.witness_cut is None:
            raise InputError("a crossing-induced matching needs a witness cut")

    @property
    def size(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self) -> List[int]:
        return sorted(v for e in self.edges for v in e)

    def violations(self, graph: Graph) -> List[str]:
        """
        Check the matching against graph

        Returns:
            Human-readable list of broken conditions (empty when valid)
        """
        problems = []
        used = set()
        for u, v in self.edges:
            if not graph.has_edge(u, v):
                problems.append(f"({u}, {v}) is not an edge")
            if u in used or v in used:
                problems.append(f"({u}, {v}) shares an endpoint")
            used.update((u, v))
        if self.kind == 'plain':
            return problems

        cut = self.witness_cut
        if cut is not None:
            for u, v in self.edges:
                if (u in cut) == (v in cut):
                    problems.append(f"({u}, {v}) does not cross the witness cut")

        for i, (a, b) in enumerate(self.edges):
            for c, d in self.edges[i + 1:]:
                for x in (a, b):
                    for y in (c, d):
                        if not graph.has_edge(x, y):
                            continue
                        if self.kind == 'induced' and cut is not None and (x in cut) == (y in cut):
                            continue
                        problems.append(f"({a}, {b}) and ({c}, {d}) are joined by ({x}, {y})")
        return problems

    def is_valid(self, graph: Graph) -> bool:
        return not self.violations(graph)

    def oriented(self) -> List[Edge]:
        """Pairs (x, y) with x on the witness side"""
        if self.witness_cut is None:
            return list(self.edges)
        return [(u, v) if u in self.witness_cut else (v, u) for u, v in self.edges]


def line_graph(graph: Graph) -> Graph:
    """
    Line graph L(G): vertex i is edge i of graph, labelled by its endpoints

    Args:
        graph: Source graph

    Returns:
        Graph whose vertices are indexed by the edge order of graph
    """
    if graph.m == 0:
        raise InputError("line graph undefined for edgeless input")
    incident: List[List[int]] = [[] for _ in range(graph.n)]
    for i, (u, v) in enumerate(graph.edges):
        incident[u].append(i)
        incident[v].append(i)

    edges = set()
    for around in incident:
        for a in range(len(around)):
            for b in range(a + 1, len(around)):
                edges.add(_normalize(around[a], around[b]))

    lg = Graph(graph.m, tuple(sorted(edges)), tuple(graph.edges))
    logger.debug(f"Line graph of {graph.n}-vertex graph: {lg.n} vertices, {lg.m} edges")
    return lg


def graph_power(graph: Graph, r: int) -> Graph:
    """
    r-th power: join two distinct vertices at distance at most r

    Args:
        graph: Source graph
        r: Exponent, at least 1

    Returns:
        Graph on the same vertices with sorted edges
    """
    if r < 1:
        raise InputError(f"power exponent must be at least 1, got {r}")
    nx_graph = graph.to_networkx()
    edges = []
    for u in range(graph.n):
        reach = nx.single_source_shortest_path_length(nx_graph, u, cutoff=r)
        edges.extend((u, v) for v in reach if v > u)
    return Graph(graph.n, tuple(sorted(edges)), graph.labels)


def contraction_map(graph: Graph, u: int, v: int) -> List[int]:
    """
    Vertex relabelling of the contraction of uv

    Survivors keep their relative order; the merged vertex gets id n-2.
    """
    if not graph.has_edge(u, v):
        raise InputError(f"cannot contract non-edge ({u}, {v})")
    merged = graph.n - 2
    mapping = []
    next_id = 0
    for x in range(graph.n):
        if x in (u, v):
            mapping.append(merged)
        else:
            mapping.append(next_id)
            next_id += 1
    return mapping


def contract_edge(graph: Graph, u: int, v: int) -> Tuple[Graph, List[Optional[int]]]:
    """
    Contract the edge uv into a single vertex

    Args:
        graph: Source graph
        u, v: Endpoints of an edge

    Returns:
        (contracted graph, edge map) where edge map sends each source edge
        index to its image edge index; uv maps to None and parallel images
        collapse onto the first one in source order
    """
    mapping = contraction_map(graph, u, v)
    new_edges: List[Edge] = []
    seen: Dict[Edge, int] = {}
    edge_map: List[Optional[int]] = []
    for a, b in graph.edges:
        if {a, b} == {u, v}:
            edge_map.append(None)
            continue
        e = _normalize(mapping[a], mapping[b])
        if e not in seen:
            seen[e] = len(new_edges)
            new_edges.append(e)
        edge_map.append(seen[e])

    labels = None
    if graph.labels is not None:
        labels = [None] * (graph.n - 1)
        for x in range(graph.n):
            if x not in (u, v):
                labels[mapping[x]] = graph.labels[x]
        labels[graph.n - 2] = (graph.labels[u], graph.labels[v])

    contracted = Graph(graph.n - 1, tuple(new_edges), None if labels is None else tuple(labels))
    return contracted, edge_map


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> Graph:
    """
    Subgraph induced by vertices, relabelled densely in increasing id order

    Labels carry the original label (or the original id when unlabelled).
    """
    kept = sorted(set(vertices))
    for v in kept:
        if not 0 <= v < graph.n:
            raise InputError(f"vertex {v} is not in the graph")
    index = {v: i for i, v in enumerate(kept)}
    edges = [(index[a], index[b]) for a, b in graph.edges if a in index and b in index]
    return Graph(len(kept), tuple(edges), tuple(graph.label(v) for v in kept))


def delete_vertex(graph: Graph, v: int) -> Graph:
    if not 0 <= v < graph.n:
        raise InputError(f"vertex {v} is not in the graph")
    return induced_subgraph(graph, (x for x in range(graph.n) if x != v))


def closed_edge_neighbourhood(graph: Graph, e: Edge) -> int:
    u, v = e
    return graph.adjacency[u] | graph.adjacency[v] | (1 << u) | (1 << v)


def assert_matching(graph: Graph, matching: Matching) -> Matching:
    problems = matching.violations(graph)
    if problems:
        raise InvariantViolation(f"{matching.kind} matching failed verification: {problems[0]}")
    return matching
