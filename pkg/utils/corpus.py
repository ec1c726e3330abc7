"""
Graph corpora for the verification suites
Exhaustive small graphs from the networkx atlas, graphs enumerated by edge count
and seeded random families
"""

import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from core.generators import FamilySpec, generate
from core.graph import Graph
from utils.helpers import get_default_seed, get_log_level

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

CorpusEntry = Tuple[str, Graph]

# The atlas lists every graph on at most this many vertices
ATLAS_MAX_VERTICES = 7


def _atlas() -> Iterator[Tuple[int, nx.Graph]]:
    for index, nx_graph in enumerate(nx.graph_atlas_g()):
        if nx_graph.number_of_nodes():
            yield index, nx_graph


def connected_graphs(max_n: int, min_n: int = 1) -> List[CorpusEntry]:
    """
    Every connected graph with min_n..max_n vertices, up to isomorphism

    Args:
        max_n: Largest vertex count, at most 7
        min_n: Smallest vertex count

    Returns:
        [(graph id, Graph)] in atlas order
    """
    if max_n > ATLAS_MAX_VERTICES:
        raise ValueError(f"exhaustive corpus stops at {ATLAS_MAX_VERTICES} vertices, got {max_n}")
    corpus = []
    for index, nx_graph in _atlas():
        n = nx_graph.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(nx_graph):
            corpus.append((f"atlas-{index}", Graph.from_networkx(nx_graph)))
    logger.debug(f"{len(corpus)} connected graphs on {min_n}..{max_n} vertices")
    return corpus


@lru_cache(maxsize=None)
def _edge_layer(m: int) -> Tuple[nx.Graph, ...]:
    """
    Graphs with m edges and no isolated vertex, up to isomorphism

    Layer m grows from layer m - 1 by one new edge: between two existing
    non-adjacent vertices, to one new pendant vertex, or as a new K2
    component. Deleting any edge of a graph and then its isolated endpoints
    lands in layer m - 1, so every graph is reached.
    """
    if m == 1:
        return (nx.Graph([(0, 1)]),)
    buckets: Dict[str, List[nx.Graph]] = {}
    layer: List[nx.Graph] = []
    for base in _edge_layer(m - 1):
        n = base.number_of_nodes()
        grown = [(u, v) for u in range(n) for v in range(u + 1, n) if not base.has_edge(u, v)]
        grown += [(u, n) for u in range(n)] + [(n, n + 1)]
        for u, v in grown:
            candidate = base.copy()
            candidate.add_edge(u, v)
            bucket = buckets.setdefault(nx.weisfeiler_lehman_graph_hash(candidate), [])
            if not any(nx.is_isomorphic(candidate, other) for other in bucket):
                bucket.append(candidate)
                layer.append(candidate)
    logger.debug(f"{len(layer)} graphs with {m} edges and no isolated vertex")
    return tuple(layer)


def graphs_by_edge_count(min_m: int, max_m: int, max_n: Optional[int] = None) -> List[CorpusEntry]:
    """
    Every graph without isolated vertices whose edge count lies in min_m..max_m

    Args:
        min_m: Smallest edge count, at least 1
        max_m: Largest edge count
        max_n: Optional vertex limit

    Returns:
        [(graph id, Graph)] ordered by edge count
    """
    if min_m < 1:
        raise ValueError(f"edge counts start at 1, got {min_m}")
    corpus = []
    for m in range(min_m, max_m + 1):
        for i, nx_graph in enumerate(_edge_layer(m)):
            if max_n is None or nx_graph.number_of_nodes() <= max_n:
                corpus.append((f"edges-{m}-{i}", Graph.from_networkx(nx_graph)))
    return corpus


def random_graphs(count: int, max_n: int, seed: Optional[int] = None, min_n: int = 2,
                  density: float = 0.5) -> List[CorpusEntry]:
    """
    Seeded Erdos-Renyi style graphs

    Args:
        count: Number of graphs
        max_n: Largest vertex count
        seed: numpy generator seed (WIDTHFORGE_SEED when omitted)
        min_n: Smallest vertex count
        density: Edge probability
    """
    seed = get_default_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    corpus = []
    for i in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        coins = rng.random(n * (n - 1) // 2)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges = [pair for pair, coin in zip(pairs, coins) if coin < density]
        corpus.append((f"random-{seed}-{i}", Graph(n, tuple(edges))))
    return corpus


def chordal_graphs(count: int, max_n: int, seed: Optional[int] = None, min_n: int = 2) -> List[CorpusEntry]:
    """random-chordal family members with consecutive seeds"""
    seed = get_default_seed() if seed is None else seed
    corpus = []
    for i in range(count):
        n = min_n + i % (max_n - min_n + 1)
        spec = FamilySpec('random-chordal', (n,), seed + i)
        corpus.append((spec.describe(), generate(spec)))
    return corpus


def compiler_graphs(count: int, max_n: int = 12, seed: Optional[int] = None) -> List[CorpusEntry]:
    """
    Mix of structured families and sparse random graphs for the compiler suite

    Structured members come first so small counts still cover cycles, grids
    and walls.
    """
    seed = get_default_seed() if seed is None else seed
    structured = [
        FamilySpec('cycle', (5,)), FamilySpec('path', (6,)), FamilySpec('grid', (3, 3)),
        FamilySpec('elementary-wall', (2, 2)), FamilySpec('l-caterpillar', (4,)),
        FamilySpec('star', (6,)), FamilySpec('biclique', (2, 3)), FamilySpec('cycle', (8,)),
        FamilySpec('complete', (4,)), FamilySpec('degeneracy-counterexample', (2,)),
    ]
    corpus: List[CorpusEntry] = []
    for spec in structured:
        graph = generate(spec)
        if graph.n <= max_n:
            corpus.append((spec.describe(), graph))
    if len(corpus) < count:
        corpus.extend(random_graphs(count - len(corpus), max_n, seed, min_n=3, density=0.3))
    return corpus[:count]
