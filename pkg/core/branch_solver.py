"""
Branch decompositions
Representation, per-edge width evaluation, exact optimization and tree surgery
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from core.cut_functions import CutFunction
from core.errors import InputError, InvariantViolation, PreconditionError, SizeCapError
from core.graph import Graph
from utils.helpers import get_log_level, get_size_cap, lowest_bit, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

TreeEdge = Tuple[int, int]

# Above this many elements the solver switches to threshold decisions
PURE_DP_LIMIT = 12


@dataclass(frozen=True)
class BranchDecomposition:
    """
    Subcubic tree whose leaves biject with a ground set 0..s-1

    leaf_of[x] is the tree node holding element x.
    """

    num_nodes: int
    tree_edges: Tuple[TreeEdge, ...]
    leaf_of: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'tree_edges', tuple((int(a), int(b)) for a, b in self.tree_edges))
        object.__setattr__(self, 'leaf_of', tuple(int(x) for x in self.leaf_of))
        problem = self._structural_problem()
        if problem:
            raise InputError(f"invalid branch decomposition: {problem}")

    def _structural_problem(self) -> Optional[str]:
        nodes, s = self.num_nodes, len(self.leaf_of)
        if s == 0:
            return None if nodes == 0 and not self.tree_edges else "empty ground set needs an empty tree"
        if nodes < 1:
            return "tree has no nodes"
        if len(self.tree_edges) != nodes - 1:
            return f"{nodes} nodes need {nodes - 1} edges, got {len(self.tree_edges)}"
        degree = [0] * nodes
        seen = set()
        for a, b in self.tree_edges:
            if not (0 <= a < nodes and 0 <= b < nodes) or a == b:
                return f"bad tree edge ({a}, {b})"
            key = (min(a, b), max(a, b))
            if key in seen:
                return f"repeated tree edge {key}"
            seen.add(key)
            degree[a] += 1
            degree[b] += 1
        if max(degree) > 3:
            return f"node {degree.index(max(degree))} has degree {max(degree)} > 3"
        if len(set(self.leaf_of)) != s:
            return "leaf map is not injective"
        for node in self.leaf_of:
            if not 0 <= node < nodes:
                return f"leaf map points at missing node {node}"
            if degree[node] > 1:
                return f"element mapped to internal node {node}"
        leaves = {v for v in range(nodes) if degree[v] <= 1}
        if leaves != set(self.leaf_of):
            return f"unmapped leaves {sorted(leaves - set(self.leaf_of))}"
        # connectivity; with nodes - 1 edges this also rules out cycles
        reached = {0}
        stack = [0]
        adjacency = self.adjacency
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != nodes:
            return "tree is disconnected"
        return None

    @property
    def ground_size(self) -> int:
        return len(self.leaf_of)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        adj: List[List[int]] = [[] for _ in range(self.num_nodes)]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @cached_property
    def element_at(self) -> Dict[int, int]:
        return {node: x for x, node in enumerate(self.leaf_of)}

    @cached_property
    def cuts(self) -> Tuple[int, ...]:
        """A_e for every tree edge (a, b): the elements on b's side, as a mask"""
        if self.num_nodes == 0:
            return ()
        parent = [-1] * self.num_nodes
        order = [0]
        parent[0] = 0
        for v in order:
            for w in self.adjacency[v]:
                if parent[w] == -1:
                    parent[w] = v
                    order.append(w)
        below = [0] * self.num_nodes
        for v in reversed(order):
            if v in self.element_at:
                below[v] |= 1 << self.element_at[v]
            if v != 0:
                below[parent[v]] |= below[v]
        full = (1 << self.ground_size) - 1
        result = []
        for a, b in self.tree_edges:
            result.append(below[b] if parent[b] == a and b != 0 else full & ~below[a])
        return tuple(result)

    def cut_partitions(self) -> List[Tuple[int, int]]:
        """Sorted unordered bipartitions, for comparing trees up to shape"""
        full = (1 << self.ground_size) - 1
        return sorted(tuple(sorted((mask, full & ~mask))) for mask in self.cuts)

    @classmethod
    def from_tree(cls, edges: Iterable[TreeEdge], leaf_of: Sequence[int],
                  extra_nodes: Iterable[int] = ()) -> 'BranchDecomposition':
        """Build from arbitrary node ids, relabelling them densely in sorted order"""
        edges = list(edges)
        nodes = sorted({v for e in edges for v in e} | set(leaf_of) | set(extra_nodes))
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), tuple((index[a], index[b]) for a, b in edges),
                   tuple(index[v] for v in leaf_of))

    @classmethod
    def trivial(cls, ground_size: int) -> 'BranchDecomposition':
        """The unique decomposition of a ground set with at most two elements"""
        if ground_size == 0:
            return cls(0, (), ())
        if ground_size == 1:
            return cls(1, (), (0,))
        if ground_size == 2:
            return cls(2, ((0, 1),), (0, 1))
        raise InputError(f"no unique decomposition for {ground_size} elements")


@dataclass(frozen=True)
class WidthReport:
    """Width of one decomposition under one cut function"""

    kind: str
    value: int
    witness: BranchDecomposition
    worst_edge: Optional[TreeEdge]
    edge_values: Tuple[Tuple[TreeEdge, int], ...]

    def summary(self) -> Dict:
        return {
            'kind': self.kind,
            'value': self.value,
            'worst_edge': self.worst_edge,
            'tree_nodes': self.witness.num_nodes,
            'elements': self.witness.ground_size,
        }


FunctionLike = Union[CutFunction, str]


def _as_function(graph: Graph, function: FunctionLike) -> CutFunction:
    if isinstance(function, CutFunction):
        if function.graph is not graph and function.graph != graph:
            raise InputError("cut function is bound to a different graph")
        return function
    return CutFunction(function, graph)


def width_of(graph: Graph, bd: BranchDecomposition, function: FunctionLike) -> WidthReport:
    """
    Evaluate a decomposition: the maximum cut value over its tree edges

    Args:
        graph: Graph the cut function reads
        bd: Decomposition of the function's ground set
        function: CutFunction or kind name

    Returns:
        WidthReport with per-edge values and the first edge attaining the maximum
    """
    f = _as_function(graph, function)
    if bd.ground_size != f.ground_size:
        raise InputError(
            f"leaf map covers {bd.ground_size} elements but {f.kind} has a ground set of {f.ground_size}"
        )
    if not bd.tree_edges:
        return WidthReport(f.kind, f.evaluate(0), bd, None, ())

    edge_values = tuple((edge, f.evaluate(mask)) for edge, mask in zip(bd.tree_edges, bd.cuts))
    worst_edge, value = max(edge_values, key=lambda item: item[1])
    return WidthReport(f.kind, value, bd, worst_edge, edge_values)


class BranchWidthSolver:
    """
    Exact f-branch-width by subset dynamic programming

    W(S) = min over splits {A, B} of S of max(f(A), f(B), W(A), W(B)),
    singletons contributing only their cut value.
    """

    def __init__(self, graph: Graph, function: FunctionLike):
        self.function = _as_function(graph, function)
        self.graph = graph
        self.size = self.function.ground_size
        self.full = (1 << self.size) - 1
        self.logger = logger

    def solve(self, prune: Optional[bool] = None) -> WidthReport:
        """
        Find an optimal decomposition

        Args:
            prune: Force (True) or forbid (False) the threshold-decision search;
                   None picks it above PURE_DP_LIMIT elements

        Returns:
            WidthReport of an optimal witness
        """
        cap = get_size_cap(self.function.kind)
        if self.size > cap:
            raise SizeCapError(f"{self.function.kind}-branch-width", self.size, cap)
        if self.size <= 2:
            bd = BranchDecomposition.trivial(self.size)
            return width_of(self.graph, bd, self.function)

        if prune is None:
            prune = self.size > PURE_DP_LIMIT
        values = self._values_table()
        splits = self._decision_search(values) if prune else self._pure_dp(values)

        bd = self._build_tree(splits)
        report = width_of(self.graph, bd, self.function)
        self.logger.info(
            f"{self.function.kind}-branch-width {report.value} over {self.size} elements"
            f"{' (threshold search)' if prune else ''}"
        )
        return report

    def _values_table(self) -> List[int]:
        if self.function.kind == 'eta':
            return self._eta_table()
        return self.function.values_table()

    def _eta_table(self) -> List[int]:
        endpoints = [(1 << u) | (1 << v) for u, v in self.graph.edges]
        cover = [0] * (1 << self.size)
        for mask in range(1, 1 << self.size):
            low = mask & -mask
            cover[mask] = cover[mask ^ low] | endpoints[low.bit_length() - 1]
        full = self.full
        return [popcount(cover[mask] & cover[full ^ mask]) for mask in range(1 << self.size)]

    def _pure_dp(self, values: List[int]) -> Dict[int, Tuple[int, int]]:
        best_width = [0] * (1 << self.size)
        split: Dict[int, Tuple[int, int]] = {}
        for whole in range(1, 1 << self.size):
            if popcount(whole) < 2:
                continue
            low = whole & -whole
            rest = whole ^ low
            best_key = None
            best_pair = None
            sub = rest
            while True:
                if sub != rest:
                    a = low | sub
                    b = whole ^ a
                    width = max(values[a], values[b], best_width[a], best_width[b])
                    key = (width, min(a, b))
                    if best_key is None or key < best_key:
                        best_key, best_pair = key, (a, b)
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            best_width[whole] = best_key[0]
            split[whole] = best_pair
        return split

    def _decision_search(self, values: List[int]) -> Dict[int, Tuple[int, int]]:
        lower = max(values[1 << x] for x in range(self.size))
        # prefix cuts of the identity order bound the optimum from above
        upper = max(lower, max(values[(1 << i) - 1] for i in range(1, self.size + 1)))
        for w in range(lower, upper + 1):
            splits = self._decide(values, w)
            if splits is not None:
                return splits
        raise InvariantViolation("prefix caterpillar does not meet its own width")

    def _decide(self, values: List[int], w: int) -> Optional[Dict[int, Tuple[int, int]]]:
        feasible = [a for a in range(1, self.full) if values[a] <= w]
        memo: Dict[int, Optional[Tuple[int, int]]] = {}

        def good(whole: int) -> bool:
            if whole & (whole - 1) == 0:
                return True
            if whole in memo:
                return memo[whole] is not None
            low = whole & -whole
            rest = whole ^ low
            memo[whole] = None
            if 1 << (popcount(whole) - 1) <= len(feasible):
                candidates = (low | sub for sub in _proper_submasks_with_zero(rest))
            else:
                candidates = (a for a in feasible if a & low and not a & ~whole and a != whole)
            for a in candidates:
                b = whole ^ a
                if values[a] > w or values[b] > w:
                    continue
                if good(a) and good(b):
                    memo[whole] = (a, b)
                    return True
            return False

        if not good(self.full):
            self.logger.debug(f"{self.function.kind}: no decomposition of width {w}")
            return None
        return {whole: pair for whole, pair in memo.items() if pair is not None}

    def _build_tree(self, splits: Dict[int, Tuple[int, int]]) -> BranchDecomposition:
        edges: List[TreeEdge] = []
        leaf_of = [0] * self.size
        counter = [self.size]

        def build(whole: int) -> int:
            if whole & (whole - 1) == 0:
                x = lowest_bit(whole)
                leaf_of[x] = x
                return x
            node = counter[0]
            counter[0] += 1
            a, b = splits[whole]
            edges.append((node, build(a)))
            edges.append((node, build(b)))
            return node

        a, b = splits[self.full]
        edges.append((build(a), build(b)))
        return BranchDecomposition.from_tree(edges, leaf_of)


def _proper_submasks_with_zero(mask: int) -> Iterator[int]:
    sub = (mask - 1) & mask if mask else 0
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def solve_branchwidth(graph: Graph, function: FunctionLike, prune: Optional[bool] = None) -> WidthReport:
    return BranchWidthSolver(graph, function).solve(prune)


def caterpillar_bd(order: Sequence[int]) -> BranchDecomposition:
    """
    Linear decomposition whose cuts are the prefixes of order

    Args:
        order: Permutation of the ground set 0..s-1
    """
    s = len(order)
    if sorted(order) != list(range(s)):
        raise InputError("caterpillar order must be a permutation of the ground set")
    if s <= 2:
        return BranchDecomposition.trivial(s)
    spine = [s + i for i in range(s - 2)]
    edges = [(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
    leaf_of = [0] * s
    for position, x in enumerate(order):
        attach = spine[min(max(position - 1, 0), len(spine) - 1)]
        edges.append((attach, x))
        leaf_of[x] = x
    return BranchDecomposition.from_tree(edges, leaf_of)


def trim_leaf(bd: BranchDecomposition, element: int) -> BranchDecomposition:
    """
    Remove element's pendant path up to the nearest node of degree at least 3

    Elements after the removed one shift down by one.
    """
    if not 0 <= element < bd.ground_size:
        raise InputError(f"element {element} is not mapped")
    adjacency = bd.adjacency
    if all(len(neighbours) < 3 for neighbours in adjacency):
        raise PreconditionError("trimming needs a tree node of degree at least 3")

    removed = set()
    previous, current = None, bd.leaf_of[element]
    while len(adjacency[current]) < 3:
        removed.add(current)
        step = [w for w in adjacency[current] if w != previous]
        previous, current = current, step[0]

    edges = [(a, b) for a, b in bd.tree_edges if a not in removed and b not in removed]
    leaf_of = [node for x, node in enumerate(bd.leaf_of) if x != element]
    return BranchDecomposition.from_tree(edges, leaf_of)


def contract_degree2(bd: BranchDecomposition) -> BranchDecomposition:
    """Suppress internal degree-2 nodes; cut family and leaves are unchanged"""
    if bd.ground_size < 2:
        return bd
    adjacency = {v: set(ws) for v, ws in enumerate(bd.adjacency)}
    leaves = set(bd.leaf_of)
    for v in range(bd.num_nodes):
        if v in leaves or len(adjacency[v]) != 2:
            continue
        a, b = adjacency.pop(v)
        adjacency[a].discard(v)
        adjacency[b].discard(v)
        adjacency[a].add(b)
        adjacency[b].add(a)
    edges = [(a, b) for a in adjacency for b in adjacency[a] if a < b]
    return BranchDecomposition.from_tree(edges, bd.leaf_of)


def enumerate_branch_decompositions(size: int) -> Iterator[BranchDecomposition]:
    """
    Every decomposition of 0..size-1 whose internal nodes have degree 3

    Leaves are inserted one at a time onto every edge, which produces each
    labelled ternary tree exactly once.
    """
    if size <= 2:
        yield BranchDecomposition.trivial(size)
        return

    def grow(edges: List[TreeEdge], next_node: int, element: int) -> Iterator[List[TreeEdge]]:
        if element == size:
            yield edges
            return
        for i, (a, b) in enumerate(edges):
            grown = edges[:i] + edges[i + 1:] + [(a, next_node), (next_node, b), (next_node, element)]
            yield from grow(grown, next_node + 1, element + 1)

    start = [(0, size), (1, size), (2, size)]
    for edges in grow(start, size + 1, 3):
        yield BranchDecomposition(2 * size - 2, tuple(edges), tuple(range(size)))



def line_graph_bd(graph: Graph, bd: BranchDecomposition) -> BranchDecomposition:
    """
    Reinterpret an edge decomposition of graph as a vertex decomposition of L(graph)

    Line-graph vertex i is edge i of graph, so the tree is unchanged.
    """
    if bd.ground_size != graph.m:
        raise InputError(f"decomposition has {bd.ground_size} leaves but graph has {graph.m} edges")
    return bd
