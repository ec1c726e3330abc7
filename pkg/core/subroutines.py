"""
Exact subroutines
Matchings, induced matchings, independent sets, degeneracy and induced bicliques
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from core.errors import InputError
from core.graph import Graph, Matching, assert_matching
from utils.helpers import bits_to_list, get_log_level, iter_bits, lowest_bit, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

MODES = ('full-graph', 'bipartite-cut')


def max_matching(graph: Graph, cut: Optional[Iterable[int]] = None) -> Matching:
    """
    Maximum matching of graph, or of the bipartite graph crossing cut

    Args:
        graph: Input graph
        cut: Optional side X of the bipartition (X, V \\ X)

    Returns:
        Plain matching of maximum size
    """
    if cut is None:
        pairs = nx.max_weight_matching(graph.to_networkx(), maxcardinality=True)
        return Matching(tuple(pairs), 'plain')

    side = _cut_mask(graph, cut)
    return Matching(tuple(crossing_matching_pairs(graph, side)), 'plain', frozenset(iter_bits(side)))


def crossing_matching_pairs(graph: Graph, side: int) -> List[Tuple[int, int]]:
    """Maximum matching of the bipartite graph G[X, V \\ X] given X as a mask"""
    bipartite = nx.Graph()
    top = [v for v in iter_bits(side)]
    bipartite.add_nodes_from(top)
    for u, v in graph.edges:
        if (side >> u & 1) != (side >> v & 1):
            bipartite.add_edge(u, v)
    if bipartite.number_of_edges() == 0:
        return []
    top = [v for v in top if bipartite.degree(v) > 0]
    bipartite.remove_nodes_from([v for v in list(bipartite.nodes()) if bipartite.degree(v) == 0])
    pairs = nx.bipartite.hopcroft_karp_matching(bipartite, top_nodes=top)
    return sorted((x, y) for x, y in pairs.items() if side >> x & 1)


def max_induced_matching(graph: Graph, cut: Optional[Iterable[int]] = None,
                         mode: str = 'full-graph') -> Matching:
    """
    Maximum induced matching, optionally restricted to edges crossing a cut

    Args:
        graph: Input graph
        cut: Optional side X of the bipartition
        mode: 'full-graph' requires the matching to be induced in graph
              (the semi-induced reading); 'bipartite-cut' only in G[X, V \\ X]

    Returns:
        Matching tagged 'induced' (no cut or bipartite-cut mode) or
        'crossing-induced' (cut in full-graph mode); among maximum matchings
        the one with the lexicographically smallest sorted edge list
    """
    if mode not in MODES:
        raise InputError(f"unknown induced-matching mode {mode!r}; expected one of {MODES}")
    side = None if cut is None else _cut_mask(graph, cut)
    pairs = induced_matching_pairs(graph, side, mode, canonical=True)

    if side is None:
        result = Matching(tuple(pairs), 'induced')
    elif mode == 'full-graph':
        result = Matching(tuple(pairs), 'crossing-induced', frozenset(iter_bits(side)))
    else:
        result = Matching(tuple(pairs), 'induced', frozenset(iter_bits(side)))
    return assert_matching(graph, result)


def induced_matching_pairs(graph: Graph, side: Optional[int], mode: str,
                           canonical: bool = False) -> List[Tuple[int, int]]:
    """
    Kernel behind max_induced_matching working on a side mask

    Two candidate edges are compatible when neither touches the closed
    neighbourhood of the other under the relevant adjacency; a maximum
    induced matching is a maximum clique of the compatibility graph.
    With canonical set, ties go to the lexicographically smallest sorted
    edge list, so the result does not depend on edge insertion order.
    """
    adjacency = graph.adjacency
    if side is None:
        candidates = list(graph.edges)
        relevant = adjacency
    else:
        candidates = [e for e in graph.edges if (side >> e[0] & 1) != (side >> e[1] & 1)]
        if mode == 'bipartite-cut':
            other = graph.full_mask & ~side
            relevant = tuple(adjacency[v] & (other if side >> v & 1 else side) for v in range(graph.n))
        else:
            relevant = adjacency

    if not candidates:
        return []

    closed = [relevant[u] | relevant[v] | (1 << u) | (1 << v) for u, v in candidates]
    masks = [(1 << u) | (1 << v) for u, v in candidates]

    compatibility = nx.Graph()
    compatibility.add_nodes_from(range(len(candidates)))
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            if not (masks[j] & closed[i]) and not (masks[i] & closed[j]):
                compatibility.add_edge(i, j)

    if compatibility.number_of_edges() == 0:
        return [min(candidates)]
    clique, _ = nx.max_weight_clique(compatibility, weight=None)
    if canonical:
        return _first_clique(compatibility, candidates, len(clique))
    return sorted(candidates[i] for i in clique)


def _first_clique(compatibility: nx.Graph, candidates: List[Tuple[int, int]], size: int) -> List[Tuple[int, int]]:
    """
    Lexicographically smallest sorted edge list among cliques of the given size

    Walks candidates in sorted order and keeps one only if the compatible
    candidates after it still hold a clique of the remaining size.
    """
    pool = sorted(range(len(candidates)), key=candidates.__getitem__)
    chosen: List[int] = []
    while len(chosen) < size:
        need = size - len(chosen) - 1
        for position, i in enumerate(pool):
            rest = [j for j in pool[position + 1:] if compatibility.has_edge(i, j)]
            if need == 0 or (len(rest) >= need
                             and nx.max_weight_clique(compatibility.subgraph(rest), weight=None)[1] >= need):
                chosen.append(i)
                pool = rest
                break
    return [candidates[i] for i in chosen]


def _cut_mask(graph: Graph, cut: Iterable[int]) -> int:
    side = 0
    for v in cut:
        if not isinstance(v, int) or not 0 <= v < graph.n:
            raise InputError(f"cut mentions {v!r}, which is not a vertex of the graph")
        side |= 1 << v
    return side


def independence_number(graph: Graph, within: Optional[Iterable[int]] = None) -> Tuple[int, Tuple[int, ...]]:
    """
    Exact independence number of graph[within]

    Args:
        graph: Input graph
        within: Optional vertex subset (default: all vertices)

    Returns:
        (alpha, lexicographically smallest maximum independent set)
    """
    mask = graph.full_mask if within is None else _cut_mask(graph, within)
    best = max_independent_mask(graph.adjacency, mask)
    return popcount(best), tuple(bits_to_list(best))


def max_independent_mask(adjacency, mask: int, memo: Optional[Dict[int, int]] = None) -> int:
    """
    Branch-and-bound maximum independent set on a bit-set graph

    Among maximum sets the lexicographically smallest sorted id list wins.
    """
    if memo is None:
        memo = {}
    return _mis(adjacency, mask, memo)


def _mis(adjacency, mask: int, memo: Dict[int, int]) -> int:
    if mask == 0:
        return 0
    hit = memo.get(mask)
    if hit is not None:
        return hit

    v = lowest_bit(mask)
    rest = mask & ~(1 << v)
    if not adjacency[v] & mask:
        result = (1 << v) | _mis(adjacency, rest, memo)
    else:
        take = (1 << v) | _mis(adjacency, rest & ~adjacency[v], memo)
        skip = _mis(adjacency, rest, memo)
        # ties go to the set containing the smaller id
        result = take if popcount(take) >= popcount(skip) else skip
    memo[mask] = result
    return result


def alpha_of_mask(adjacency, mask: int, memo: Optional[Dict[int, int]] = None) -> int:
    return popcount(max_independent_mask(adjacency, mask, memo))


def independent_set_of_size(adjacency, mask: int, size: int) -> Optional[int]:
    """
    Size-bounded search for an independent set inside mask

    Stops as soon as size vertices are collected.

    Returns:
        Bit mask of the lexicographically first such set, or None
    """
    if size <= 0:
        return 0

    failed = set()

    def search(candidates: int, chosen: int, need: int) -> Optional[int]:
        if need == 0:
            return chosen
        if (candidates, need) in failed:
            return None
        start = candidates
        while candidates and popcount(candidates) >= need:
            v = lowest_bit(candidates)
            candidates &= ~(1 << v)
            found = search(candidates & ~adjacency[v], chosen | (1 << v), need - 1)
            if found is not None:
                return found
        failed.add((start, need))
        return None

    return search(mask, 0, size)


def has_independent_set(graph: Graph, within: Iterable[int], size: int) -> bool:
    return independent_set_of_size(graph.adjacency, _cut_mask(graph, within), size) is not None


def degeneracy(graph: Graph) -> Tuple[int, List[int]]:
    """
    Degeneracy and a witnessing elimination order

    Repeatedly removes a minimum-degree vertex, smallest id first.

    Returns:
        (degeneracy, removal order)
    """
    remaining = graph.full_mask
    order = []
    value = 0
    while remaining:
        best_v, best_deg = -1, graph.n + 1
        for v in iter_bits(remaining):
            d = popcount(graph.adjacency[v] & remaining)
            if d < best_deg:
                best_v, best_deg = v, d
        value = max(value, best_deg)
        order.append(best_v)
        remaining &= ~(1 << best_v)
    return value, order


def find_induced_biclique(graph: Graph, n: int, m: int) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Search for an induced K_{n,m}

    Args:
        graph: Input graph
        n: Size of the first side
        m: Size of the second side

    Returns:
        (X, Y) with X, Y independent and complete to each other, or None
    """
    if n < 1 or m < 1:
        raise InputError(f"biclique sides must be positive, got ({n}, {m})")
    adjacency = graph.adjacency

    def extend(candidates: int, chosen: int, common: int, need: int):
        if need == 0:
            found = independent_set_of_size(adjacency, common, m)
            return None if found is None else (chosen, found)
        while candidates:
            v = lowest_bit(candidates)
            candidates &= ~(1 << v)
            narrowed = common & adjacency[v]
            if popcount(narrowed) < m:
                continue
            hit = extend(candidates & ~adjacency[v], chosen | (1 << v), narrowed, need - 1)
            if hit is not None:
                return hit
        return None

    hit = extend(graph.full_mask, 0, graph.full_mask, n)
    if hit is None:
        return None
    return tuple(bits_to_list(hit[0])), tuple(bits_to_list(hit[1]))


def induced_biclique_number(graph: Graph, limit: Optional[int] = None) -> int:
    """Largest t with an induced K_{t,t}; 0 for an edgeless graph"""
    upper = graph.n // 2 if limit is None else min(limit, graph.n // 2)
    best = 0
    for t in range(1, upper + 1):
        if find_induced_biclique(graph, t, t) is None:
            break
        best = t
    return best


def max_average_degree(graph: Graph) -> Fraction:
    """
    Maximum over non-empty subgraphs of 2|E(H)| / |V(H)|

    Exhaustive over induced subgraphs; only for small graphs.
    """
    if graph.n == 0:
        return Fraction(0)
    if graph.n > 20:
        raise InputError(f"max_average_degree is exhaustive; {graph.n} vertices is too many")
    best = Fraction(0)
    for mask in range(1, 1 << graph.n):
        edges = sum(popcount(graph.adjacency[v] & mask) for v in iter_bits(mask))
        best = max(best, Fraction(edges, popcount(mask)))
    return best
