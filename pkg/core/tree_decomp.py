"""
Tree decompositions
Validation, bag independence number, exact treewidth and tree-alpha oracles,
and the line-graph transport of a decomposition
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from core.errors import InputError, SizeCapError
from core.graph import Graph
from core.subroutines import max_independent_mask
from utils.helpers import get_log_level, get_size_cap, iter_bits, popcount, to_mask

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by tree node 0..len(bags)-1 over a graph with num_vertices vertices"""

    bags: Tuple[Tuple[int, ...], ...]
    tree_edges: Tuple[Tuple[int, int], ...]
    num_vertices: int

    def __post_init__(self):
        object.__setattr__(self, 'bags', tuple(tuple(sorted(set(bag))) for bag in self.bags))
        object.__setattr__(self, 'tree_edges', tuple((int(a), int(b)) for a, b in self.tree_edges))

    @property
    def num_nodes(self) -> int:
        return len(self.bags)

    @property
    def max_bag_size(self) -> int:
        return max((len(bag) for bag in self.bags), default=0)

    @property
    def width(self) -> int:
        return self.max_bag_size - 1

    def bag_mask(self, node: int) -> int:
        return to_mask(self.bags[node])


def validate(graph: Graph, td: TreeDecomposition) -> Dict:
    """
    Check the tree shape and the three decomposition conditions

    Args:
        graph: Decomposed graph
        td: Candidate decomposition

    Returns:
        {'valid': bool, 'violations': [{'condition', 'witness', 'message'}, ...]}
    """
    violations: List[Dict] = []

    def flag(condition: str, witness, message: str):
        violations.append({'condition': condition, 'witness': witness, 'message': message})

    nodes = td.num_nodes
    if td.num_vertices != graph.n:
        flag('graph', td.num_vertices, f"decomposition is for {td.num_vertices} vertices, graph has {graph.n}")
    if nodes == 0:
        if graph.n:
            flag('T1', 0, "no bags at all")
        return {'valid': not violations, 'violations': violations}

    adjacency: List[List[int]] = [[] for _ in range(nodes)]
    for a, b in td.tree_edges:
        if not (0 <= a < nodes and 0 <= b < nodes) or a == b:
            flag('tree', (a, b), f"tree edge ({a}, {b}) is not between two distinct nodes")
            continue
        adjacency[a].append(b)
        adjacency[b].append(a)
    if len(td.tree_edges) != nodes - 1 or len(_component(adjacency, 0, None)) != nodes:
        flag('tree', None, f"{nodes} nodes with {len(td.tree_edges)} edges do not form a tree")

    for node, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < graph.n:
                flag('bags', (node, v), f"bag {node} holds unknown vertex {v}")

    holders: List[List[int]] = [[] for _ in range(graph.n)]
    for node, bag in enumerate(td.bags):
        for v in bag:
            if 0 <= v < graph.n:
                holders[v].append(node)

    for v in range(graph.n):
        if not holders[v]:
            flag('T1', v, f"vertex {v} is in no bag")

    masks = [td.bag_mask(node) for node in range(nodes)]
    for u, v in graph.edges:
        pair = (1 << u) | (1 << v)
        if not any(mask & pair == pair for mask in masks):
            flag('T2', (u, v), f"no bag holds both ends of edge ({u}, {v})")

    for v in range(graph.n):
        if len(holders[v]) > 1:
            allowed = set(holders[v])
            if len(_component(adjacency, holders[v][0], allowed)) != len(allowed):
                flag('T3', v, f"bags holding vertex {v} are not connected in the tree")

    return {'valid': not violations, 'violations': violations}


def _component(adjacency: List[List[int]], start: int, allowed: Optional[set]) -> set:
    reached = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adjacency[x]:
            if y not in reached and (allowed is None or y in allowed):
                reached.add(y)
                stack.append(y)
    return reached


def _require_valid(graph: Graph, td: TreeDecomposition):
    report = validate(graph, td)
    if not report['valid']:
        first = report['violations'][0]
        raise InputError(f"invalid tree decomposition ({first['condition']}): {first['message']}")


def alpha_of(graph: Graph, td: TreeDecomposition) -> Tuple[int, Optional[int]]:
    """
    Independence number of a decomposition: the largest alpha over its bags

    Returns:
        (value, first bag node attaining it)
    """
    _require_valid(graph, td)
    memo: Dict[int, int] = {}
    best, worst = 0, None
    for node in range(td.num_nodes):
        value = popcount(max_independent_mask(graph.adjacency, td.bag_mask(node), memo))
        if worst is None or value > best:
            best, worst = value, node
    return best, worst


def td_from_elimination_order(graph: Graph, order: Sequence[int]) -> TreeDecomposition:
    """
    Bags of the elimination game: each vertex with its later neighbours in the filled graph

    Node i holds the bag of order[i]; it hangs below the node of its earliest
    later neighbour, and the roots of separate components are chained.
    """
    if sorted(order) != list(range(graph.n)):
        raise InputError("elimination order must be a permutation of the vertices")
    if graph.n == 0:
        return TreeDecomposition(((),), (), 0)

    position = {v: i for i, v in enumerate(order)}
    adjacency = list(graph.adjacency)
    remaining = graph.full_mask
    bags = []
    edges = []
    roots = []
    for i, v in enumerate(order):
        remaining &= ~(1 << v)
        later = adjacency[v] & remaining
        bags.append(tuple(iter_bits(later | (1 << v))))
        for u in iter_bits(later):
            adjacency[u] |= later & ~(1 << u)
        if later:
            edges.append((i, min(position[u] for u in iter_bits(later))))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(tuple(bags), tuple(edges), graph.n)


def _later_reach(adjacency, eliminated: int, v: int) -> int:
    """Vertices outside eliminated | v reachable from v through eliminated"""
    component = 1 << v
    frontier = 1 << v
    while frontier:
        around = 0
        for x in iter_bits(frontier):
            around |= adjacency[x]
        frontier = around & eliminated & ~component
        component |= frontier
    around = 0
    for x in iter_bits(component):
        around |= adjacency[x]
    return around & ~component & ~eliminated


def _elimination_dp(graph: Graph, bag_cost: Callable[[int], int]) -> Tuple[int, List[int]]:
    """
    Minimum over elimination orderings of the maximum bag cost

    The bag of v depends only on the set eliminated before it, so
    best[S] = min over v in S of max(best[S - v], cost(bag(S - v, v))).
    """
    n = graph.n
    adjacency = graph.adjacency
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for whole in range(1, 1 << n):
        best_value = None
        for v in iter_bits(whole):
            rest = whole & ~(1 << v)
            value = best[rest]
            if best_value is not None and value >= best_value:
                continue
            value = max(value, bag_cost((1 << v) | _later_reach(adjacency, rest, v)))
            if best_value is None or value < best_value:
                best_value, choice[whole] = value, v
        best[whole] = best_value

    order = []
    whole = (1 << n) - 1
    while whole:
        v = choice[whole]
        order.append(v)
        whole &= ~(1 << v)
    order.reverse()
    return best[(1 << n) - 1], order


def exact_treewidth(graph: Graph) -> Tuple[int, TreeDecomposition]:
    """
    Exact treewidth with a witness decomposition

    Returns:
        (treewidth, decomposition of that width)
    """
    cap = get_size_cap('tw')
    if graph.n > cap:
        raise SizeCapError('treewidth', graph.n, cap)
    if graph.n == 0:
        return 0, td_from_elimination_order(graph, [])
    value, order = _elimination_dp(graph, lambda bag: popcount(bag) - 1)
    td = td_from_elimination_order(graph, order)
    logger.debug(f"treewidth {value} on {graph.n} vertices, order {order}")
    return value, td


def exact_tree_alpha(graph: Graph) -> Tuple[int, TreeDecomposition]:
    """
    Exact tree-independence number with a witness decomposition

    Bags are restricted to those of elimination orderings; alpha only grows
    with the bag, so a minimal triangulation attains the optimum.
    """
    cap = get_size_cap('tree_alpha')
    if graph.n > cap:
        raise SizeCapError('tree-independence number', graph.n, cap)
    if graph.n == 0:
        return 0, td_from_elimination_order(graph, [])
    memo: Dict[int, int] = {}
    value, order = _elimination_dp(
        graph, lambda bag: popcount(max_independent_mask(graph.adjacency, bag, memo))
    )
    return value, td_from_elimination_order(graph, order)


def line_graph_td(graph: Graph, td: TreeDecomposition) -> TreeDecomposition:
    """
    Replace every bag by the edges of graph incident with it

    Args:
        graph: Source graph with at least one edge
        td: Valid decomposition of graph

    Returns:
        Decomposition of line_graph(graph) on the same tree
    """
    if graph.m == 0:
        raise InputError("line graph undefined for edgeless input")
    _require_valid(graph, td)
    bags = []
    for node in range(td.num_nodes):
        mask = td.bag_mask(node)
        bags.append(tuple(i for i, (u, v) in enumerate(graph.edges) if mask >> u & 1 or mask >> v & 1))
    return TreeDecomposition(tuple(bags), td.tree_edges, graph.m)
