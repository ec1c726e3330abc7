"""
Graph family generators
Named families with deterministic vertex numbering, plus structural recognition
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Tuple

import networkx as nx

from core.errors import InputError
from core.graph import Graph
from utils.helpers import get_log_level, iter_bits, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

# Classic ANSI C constants; kept fixed so random-chordal corpora match everywhere
LCG_MULTIPLIER = 1103515245
LCG_INCREMENT = 12345
LCG_MODULUS = 2 ** 31


@dataclass(frozen=True)
class FamilySpec:
    """Family name, integer parameters and an optional seed"""

    family: str
    params: Tuple[int, ...] = ()
    seed: Optional[int] = None

    def describe(self) -> str:
        args = ','.join(str(p) for p in self.params)
        suffix = '' if self.seed is None else f"@{self.seed}"
        return f"{self.family}({args}){suffix}"


class LinearCongruential:
    """Seeded integer stream used by the random families"""

    def __init__(self, seed: int):
        self.state = seed % LCG_MODULUS

    def next(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state >> 16

    def below(self, bound: int) -> int:
        return self.next() % bound


def _path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def _cycle(n: int) -> Graph:
    if n < 3:
        raise InputError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def _complete(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def _star(n: int) -> Graph:
    return Graph(n + 1, tuple((0, i) for i in range(1, n + 1)),
                 ('c',) + tuple(('leaf', i) for i in range(n)))


def _biclique(n: int, m: int) -> Graph:
    edges = tuple((i, n + j) for i in range(n) for j in range(m))
    labels = tuple(('L', i) for i in range(n)) + tuple(('R', j) for j in range(m))
    return Graph(n + m, edges, labels)


def _grid(h: int, w: int) -> Graph:
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c
            if c + 1 < w:
                edges.append((v, v + 1))
            if r + 1 < h:
                edges.append((v, v + w))
    return Graph(h * w, tuple(sorted(edges)), tuple((r, c) for r in range(h) for c in range(w)))


def _rook(n: int, m: int) -> Graph:
    """K_n box K_m: cell (i, j) has id i*m + j"""
    edges = []
    for a in range(n * m):
        for b in range(a + 1, n * m):
            if a // m == b // m or a % m == b % m:
                edges.append((a, b))
    return Graph(n * m, tuple(edges), tuple((i, j) for i in range(n) for j in range(m)))


def _clique_box_clique(t: int) -> Graph:
    """Two copies of K_t joined by the perfect matching i <-> t+i"""
    edges = list(combinations(range(t), 2))
    edges += [(t + a, t + b) for a, b in combinations(range(t), 2)]
    edges += [(i, t + i) for i in range(t)]
    return Graph(2 * t, tuple(sorted(edges)), tuple(('A', i) for i in range(t)) + tuple(('B', i) for i in range(t)))


def _clique_box_stable(t: int) -> Graph:
    """K_t joined by a perfect matching to an independent set of size t"""
    edges = list(combinations(range(t), 2)) + [(i, t + i) for i in range(t)]
    return Graph(2 * t, tuple(sorted(edges)), tuple(('A', i) for i in range(t)) + tuple(('B', i) for i in range(t)))


def _layered_counterexample(d: int) -> Graph:
    """Four layers of d vertices, complete between consecutive layers"""
    edges = []
    for layer in range(3):
        for a in range(d):
            for b in range(d):
                edges.append((layer * d + a, (layer + 1) * d + b))
    return Graph(4 * d, tuple(sorted(edges)), tuple((layer, i) for layer in range(4) for i in range(d)))


def _caterpillar(length: int) -> Graph:
    """Spine s_0..s_{l-1} (ids 0..l-1), each with a pendant t_i (id l+i)"""
    edges = [(i, i + 1) for i in range(length - 1)] + [(i, length + i) for i in range(length)]
    labels = tuple(('s', i) for i in range(length)) + tuple(('t', i) for i in range(length))
    return Graph(2 * length, tuple(sorted(edges)), labels)


def _wall_cells(h: int, r: int) -> Tuple[List[Tuple[int, int]], List[Tuple[Tuple[int, int], Tuple[int, int]]]]:
    """Cells and edges of the elementary wall before dense relabelling"""
    width = 2 * r
    edges = []
    for i in range(h):
        for j in range(width - 1):
            edges.append(((i, j), (i, j + 1)))
    for j in range(width):
        for i in range(h - 1):
            # 1-based parity: odd columns keep odd rungs, even columns keep even rungs
            column_odd = (j + 1) % 2 == 1
            rung_odd = (i + 1) % 2 == 1
            if column_odd == rung_odd:
                edges.append(((i, j), (i + 1, j)))

    degree: Dict[Tuple[int, int], int] = {(i, j): 0 for i in range(h) for j in range(width)}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    removed = {cell for cell, d in degree.items() if d <= 1}
    cells = [(i, j) for i in range(h) for j in range(width) if (i, j) not in removed]
    kept = [(a, b) for a, b in edges if a not in removed and b not in removed]
    return cells, kept


def _elementary_wall(h: int, r: int) -> Graph:
    if h < 2:
        raise InputError(f"wall height must be at least 2, got {h}")
    if r < 1:
        raise InputError(f"wall width must be at least 1, got {r}")
    cells, kept = _wall_cells(h, r)
    index = {cell: k for k, cell in enumerate(cells)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in kept)
    return Graph(len(cells), tuple(edges), tuple(cells))


def _net_wall(h: int, r: int) -> Graph:
    """Elementary wall with every degree-3 vertex replaced by a triangle of ports"""
    wall = _elementary_wall(h, r)
    labels: List[Any] = []
    port: Dict[Tuple[int, int], int] = {}
    single: Dict[int, int] = {}
    triangles = []
    for u in range(wall.n):
        if wall.degree(u) == 3:
            ids = []
            for v in wall.neighbors(u):
                port[(u, v)] = len(labels)
                ids.append(len(labels))
                labels.append((wall.label(u), wall.label(v)))
            triangles.append(ids)
        else:
            single[u] = len(labels)
            labels.append((wall.label(u),))

    def endpoint(u: int, v: int) -> int:
        return port[(u, v)] if (u, v) in port else single[u]

    edges = set()
    for u, v in wall.edges:
        a, b = endpoint(u, v), endpoint(v, u)
        edges.add((min(a, b), max(a, b)))
    for ids in triangles:
        for a, b in combinations(ids, 2):
            edges.add((a, b))
    return Graph(len(labels), tuple(sorted(edges)), tuple(labels))


def _random_chordal(n: int, seed: int) -> Graph:
    """
    Each new vertex attaches to a clique grown around a random earlier vertex,
    so the reverse insertion order is a perfect elimination ordering
    """
    rng = LinearCongruential(seed)
    adjacency = [0] * n
    edges = []
    for v in range(1, n):
        anchor = rng.below(v)
        clique = 1 << anchor
        for q in iter_bits(adjacency[anchor]):
            if rng.below(2) == 0 and adjacency[q] & clique == clique & ~(1 << q):
                clique |= 1 << q
        for u in iter_bits(clique):
            adjacency[u] |= 1 << v
            adjacency[v] |= 1 << u
            edges.append((u, v))
    return Graph(n, tuple(sorted(edges)))


FAMILIES: Dict[str, Tuple[int, Callable[..., Graph]]] = {
    'path': (1, _path),
    'cycle': (1, _cycle),
    'complete': (1, _complete),
    'star': (1, _star),
    'biclique': (2, _biclique),
    'grid': (2, _grid),
    'rook': (2, _rook),
    'Kt-box-Kt': (1, _clique_box_clique),
    'Kt-box-St': (1, _clique_box_stable),
    'degeneracy-counterexample': (1, _layered_counterexample),
    'l-caterpillar': (1, _caterpillar),
    'elementary-wall': (2, _elementary_wall),
    'net-wall': (2, _net_wall),
    'random-chordal': (1, _random_chordal),
}


def generate(spec: FamilySpec) -> Graph:
    """
    Build the graph a family spec names

    Args:
        spec: Family name, parameters and seed

    Returns:
        Graph with the family's documented vertex numbering
    """
    if spec.family not in FAMILIES:
        raise InputError(f"unknown family {spec.family!r}; known: {', '.join(sorted(FAMILIES))}")
    arity, builder = FAMILIES[spec.family]
    if len(spec.params) != arity:
        raise InputError(f"{spec.family} takes {arity} parameter(s), got {len(spec.params)}")
    for p in spec.params:
        if not isinstance(p, int) or p < 1:
            raise InputError(f"{spec.family} parameters must be positive integers, got {spec.params}")

    if spec.family == 'random-chordal':
        if spec.seed is None:
            raise InputError("random-chordal needs a seed")
        graph = builder(spec.params[0], spec.seed)
    else:
        graph = builder(*spec.params)
    logger.debug(f"Generated {spec.describe()}: {graph.n} vertices, {graph.m} edges")
    return graph


def perfect_elimination_ordering(graph: Graph) -> List[int]:
    """
    Maximum cardinality search, reversed

    The result is a perfect elimination ordering exactly when graph is chordal.
    """
    weight = [0] * graph.n
    unnumbered = graph.full_mask
    visit = []
    while unnumbered:
        best = max(iter_bits(unnumbered), key=lambda v: (weight[v], -v))
        visit.append(best)
        unnumbered &= ~(1 << best)
        for w in iter_bits(graph.adjacency[best] & unnumbered):
            weight[w] += 1
    return visit[::-1]


def is_perfect_elimination_ordering(graph: Graph, order: List[int]) -> bool:
    later = graph.full_mask
    for v in order:
        later &= ~(1 << v)
        higher = graph.adjacency[v] & later
        for u in iter_bits(higher):
            if (higher & ~(1 << u)) & ~graph.adjacency[u]:
                return False
    return True


def is_chordal(graph: Graph) -> Tuple[bool, List[int]]:
    """
    Chordality test with its witness

    Returns:
        (verdict, ordering checked)
    """
    order = perfect_elimination_ordering(graph)
    return is_perfect_elimination_ordering(graph, order), order


def _is_bipartite(graph: Graph) -> bool:
    return nx.is_bipartite(graph.to_networkx())


STRUCTURAL_CHECKS: Dict[str, Callable[[Graph, FamilySpec], Tuple[bool, str]]] = {}


def _structural(*families: str):
    def register(check):
        for family in families:
            STRUCTURAL_CHECKS[family] = check
        return check
    return register


@_structural('biclique', 'grid', 'degeneracy-counterexample', 'l-caterpillar', 'path', 'star')
def _check_bipartite(graph: Graph, spec: FamilySpec) -> Tuple[bool, str]:
    return _is_bipartite(graph), 'graph is bipartite'


@_structural('rook')
def _check_rook_rule(graph: Graph, spec: FamilySpec) -> Tuple[bool, str]:
    n, m = spec.params
    for a in range(graph.n):
        for b in range(a + 1, graph.n):
            expected = a // m == b // m or a % m == b % m
            if graph.has_edge(a, b) != expected:
                return False, f"cells {a} and {b} break the same-row-or-column rule"
    return True, 'same-row-or-column rule holds'


@_structural('net-wall')
def _check_net_wall_triangles(graph: Graph, spec: FamilySpec) -> Tuple[bool, str]:
    if graph.labels is None:
        return False, 'net-wall needs port labels'
    groups: Dict[Any, int] = {}
    for v, label in enumerate(graph.labels):
        if isinstance(label, tuple) and len(label) == 2:
            groups[label[0]] = groups.get(label[0], 0) | (1 << v)
    for owner, mask in groups.items():
        for v in iter_bits(mask):
            if (graph.adjacency[v] & mask) != mask & ~(1 << v):
                return False, f"ports of {owner} do not induce a triangle"
        if popcount(mask) != 3:
            return False, f"{owner} has {popcount(mask)} ports"
    return True, 'replaced vertices induce triangles'


@_structural('random-chordal')
def _check_chordal(graph: Graph, spec: FamilySpec) -> Tuple[bool, str]:
    verdict, _ = is_chordal(graph)
    return verdict, 'perfect elimination ordering exists'


def verify_family(graph: Graph, spec: FamilySpec) -> Dict[str, Any]:
    """
    Recognize graph as a member of the named family

    Args:
        graph: Candidate graph
        spec: Family it should belong to

    Returns:
        Dictionary with 'passed' and per-check details
    """
    checks: Dict[str, Dict[str, Any]] = {}
    try:
        expected = generate(spec)
    except InputError as e:
        return {'passed': False, 'checks': checks, 'error': str(e)}

    checks['vertex_count'] = {'passed': graph.n == expected.n, 'detail': f"{graph.n} vs {expected.n}"}
    checks['edge_count'] = {'passed': graph.m == expected.m, 'detail': f"{graph.m} vs {expected.m}"}
    degrees = sorted(graph.degree(v) for v in graph.vertices)
    expected_degrees = sorted(expected.degree(v) for v in expected.vertices)
    checks['degree_sequence'] = {'passed': degrees == expected_degrees, 'detail': 'sorted degrees'}

    if graph.n == expected.n:
        if graph.labels is not None and expected.labels is not None and set(graph.labels) == set(expected.labels):
            position = {label: v for v, label in enumerate(expected.labels)}
            mapped = {tuple(sorted((position[graph.labels[a]], position[graph.labels[b]])))
                      for a, b in graph.edges}
            same = mapped == set(expected.edges)
        else:
            same = graph.same_structure(expected)
        checks['edge_set'] = {'passed': same, 'detail': 'edges match the documented numbering'}

    if spec.family in STRUCTURAL_CHECKS and graph.n == expected.n:
        ok, detail = STRUCTURAL_CHECKS[spec.family](graph, spec)
        checks['structure'] = {'passed': ok, 'detail': detail}

    passed = all(item['passed'] for item in checks.values())
    if not passed:
        failing = [name for name, item in checks.items() if not item['passed']]
        logger.info(f"{spec.describe()} recognition failed: {', '.join(failing)}")
    return {'passed': passed, 'checks': checks}
