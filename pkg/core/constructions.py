"""
Constructions
Rook caterpillar decompositions, odd-power and contraction transfers of
decompositions, and perfect-triple extraction on line-graph cuts
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.approximation import one_exchange

from core.branch_solver import BranchDecomposition, WidthReport, contract_degree2, trim_leaf, width_of
from core.errors import InputError, InvariantViolation, PreconditionError
from core.graph import Graph, Matching, assert_matching, contract_edge, graph_power, line_graph
from utils.helpers import ceil_div, get_log_level, iter_bits

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)


class _TreeBuilder:
    """Accumulates tree nodes and edges for hand-built decompositions"""

    def __init__(self):
        self.count = 0
        self.edges: List[Tuple[int, int]] = []

    def node(self) -> int:
        self.count += 1
        return self.count - 1

    def join(self, a: int, b: int):
        self.edges.append((a, b))

    def caterpillar(self, length: int) -> List[int]:
        """An l-caterpillar; returns its leaves t_1..t_l in order"""
        spine = [self.node() for _ in range(length)]
        leaves = [self.node() for _ in range(length)]
        for i in range(length):
            self.join(spine[i], leaves[i])
            if i + 1 < length:
                self.join(spine[i], spine[i + 1])
        return leaves


def rook_caterpillar_bd(n: int, m: int) -> BranchDecomposition:
    """
    Caterpillar-of-caterpillars decomposition of the n x m rook graph

    Rows are split into three groups at ceil(n/3) and floor(2n/3); each group
    hangs off a hub by a caterpillar whose leaves lead to per-row caterpillars
    holding that row's cells. Cell (i, j) is element i*m + j.

    Args:
        n: Number of rows, at least 2
        m: Number of columns, at least 2
    """
    if n < 2 or m < 2:
        raise InputError(f"rook decomposition needs n, m >= 2, got ({n}, {m})")
    a, b = ceil_div(n, 3), (2 * n) // 3
    groups = [rows for rows in (range(0, a), range(a, b), range(b, n)) if len(rows)]

    builder = _TreeBuilder()
    hub = builder.node()
    leaf_of = [0] * (n * m)
    for rows in groups:
        group_leaves = builder.caterpillar(len(rows) + 1)
        builder.join(hub, group_leaves[0])
        for row, row_leaf in zip(rows, group_leaves[1:]):
            row_leaves = builder.caterpillar(m + 1)
            builder.join(row_leaf, row_leaves[0])
            for column, cell_leaf in enumerate(row_leaves[1:]):
                leaf_of[row * m + column] = cell_leaf

    bd = BranchDecomposition(builder.count, tuple(builder.edges), tuple(leaf_of))
    logger.debug(f"rook({n},{m}) caterpillar decomposition: {bd.num_nodes} nodes, groups {[len(g) for g in groups]}")
    return bd


def odd_power_transfer(graph: Graph, bd: BranchDecomposition, r: int) -> Tuple[WidthReport, WidthReport]:
    """
    Reuse a decomposition of graph on its r-th power, r odd

    Returns:
        (sim report on graph, sim report on graph^r); every tree edge is
        checked to have a value on the power no larger than on graph
    """
    if r < 1:
        raise InputError(f"power exponent must be at least 1, got {r}")
    if r % 2 == 0:
        raise InputError("theorem applies to odd powers only")
    power = graph_power(graph, r)
    base = width_of(graph, bd, 'sim')
    lifted = width_of(power, bd, 'sim')
    for (edge, before), (_, after) in zip(base.edge_values, lifted.edge_values):
        if after > before:
            raise InvariantViolation(f"tree edge {edge}: sim value {after} on the power exceeds {before}")
    return base, lifted


def pull_back_power_matching(graph: Graph, r: int, part: Iterable[int], matching: Matching) -> Matching:
    """
    Map a crossing induced matching of graph^r back to graph

    Each pair (x, y) is replaced by the first edge leaving part along a
    shortest x-y path in graph.

    Args:
        graph: Base graph
        r: Odd exponent
        part: Side X of the cut
        matching: Crossing induced matching of graph^r for that cut

    Returns:
        Crossing induced matching of graph of the same size
    """
    if r < 1 or r % 2 == 0:
        raise InputError("theorem applies to odd powers only")
    side = frozenset(part)
    power = graph_power(graph, r)
    tagged = Matching(matching.edges, 'crossing-induced', side)
    problems = tagged.violations(power)
    if problems:
        raise InputError(f"matching is not crossing induced in the power: {problems[0]}")

    nx_graph = graph.to_networkx()
    pairs = []
    for x, y in tagged.oriented():
        path = nx.shortest_path(nx_graph, x, y)
        for a, b in zip(path, path[1:]):
            if a in side and b not in side:
                pairs.append((a, b))
                break
    return assert_matching(graph, Matching(tuple(pairs), 'crossing-induced', side))


def contraction_transfer(graph: Graph, bd: BranchDecomposition, u: int, v: int) -> Tuple[Graph, BranchDecomposition]:
    """
    Carry an edge decomposition of graph over to graph / uv

    Trims the leaves of uv and of every z v with z a common neighbour, then
    hands x u, y v and z u to the merged vertex.

    Args:
        graph: Graph with at least three edges
        bd: Decomposition of E(graph), read as a decomposition of L(graph)
        u, v: Edge to contract

    Returns:
        (contracted graph, decomposition of its edges)
    """
    if graph.m < 3:
        raise PreconditionError(f"contraction transfer needs at least 3 edges, got {graph.m}")
    if bd.ground_size != graph.m:
        raise InputError(f"decomposition has {bd.ground_size} leaves but graph has {graph.m} edges")
    contracted, edge_map = contract_edge(graph, u, v)
    if contracted.m < 2:
        raise PreconditionError("line graph of the contraction is a single vertex")

    common = graph.adjacency[u] & graph.adjacency[v]
    trimmed = {graph.index_of(u, v)} | {graph.index_of(z, v) for z in iter_bits(common)}
    tree = contract_degree2(bd)
    for element in sorted(trimmed, reverse=True):
        tree = trim_leaf(tree, element)

    survivors = [i for i in range(graph.m) if i not in trimmed]
    position = {i: p for p, i in enumerate(survivors)}
    source = [None] * contracted.m
    for i in survivors:
        source[edge_map[i]] = i
    if any(s is None for s in source):
        raise InvariantViolation("contraction left an edge without a surviving source")
    leaf_of = tuple(tree.leaf_of[position[i]] for i in source)
    return contracted, BranchDecomposition(tree.num_nodes, tree.tree_edges, leaf_of)


@dataclass
class PerfectTriple:
    """
    D with its chosen same-side and other-side neighbours

    left[x] is the smallest neighbour joined to x by an edge inside the cut
    side, right[x] the smallest joined by an edge outside it.
    """

    left: Dict[int, int]
    right: Dict[int, int]
    members: List[int] = field(default_factory=list)

    @property
    def L(self) -> set:
        return {self.left[d] for d in self.members}

    @property
    def R(self) -> set:
        return {self.right[d] for d in self.members}

    @property
    def D(self) -> set:
        return set(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    def is_perfect(self, members: Optional[Sequence[int]] = None) -> bool:
        members = self.members if members is None else members
        d = set(members)
        if len(d) != len(members):
            return False
        lefts = {self.left[x] for x in members}
        rights = {self.right[x] for x in members}
        return not (lefts & d or rights & d or lefts & rights)


class PerfectTripleSearch:
    """Grows a perfect triple on one edge cut until it reaches a target size"""

    def __init__(self, graph: Graph, side: int):
        """
        Initialize the search

        Args:
            graph: Graph whose line graph is cut
            side: Bit mask of edge indices on the A side
        """
        self.graph = graph
        self.side = side
        self.logger = logger
        left: Dict[int, int] = {}
        right: Dict[int, int] = {}
        for i, (a, b) in enumerate(graph.edges):
            table = left if side >> i & 1 else right
            for x, y in ((a, b), (b, a)):
                if x not in table or y < table[x]:
                    table[x] = y
        self.mid = sorted(set(left) & set(right))
        self.triple = PerfectTriple({x: left[x] for x in self.mid}, {x: right[x] for x in self.mid})
        self.augmentations: List[str] = []

    def run(self, target: int) -> PerfectTriple:
        if target < 1:
            raise InputError(f"target size must be positive, got {target}")
        if len(self.mid) < 25 * target - 1:
            raise PreconditionError(f"|mid| = {len(self.mid)} is below 25n - 1 = {25 * target - 1}")

        triple = self.triple
        while triple.size < target:
            k = triple.size
            extension = self._extension()
            if extension is not None:
                triple.members.append(extension)
                continue
            grown, label = self._augment(k)
            if len(grown) <= k or not triple.is_perfect(grown):
                raise InvariantViolation(f"{label} augmentation did not grow the perfect triple past {k}")
            self.augmentations.append(label)
            self.logger.debug(f"perfect triple {k} -> {len(grown)} via {label}")
            triple.members = list(grown)
        return triple

    def _extension(self) -> Optional[int]:
        triple = self.triple
        taken = triple.D
        for x in self.mid:
            if x not in taken and triple.is_perfect(triple.members + [x]):
                return x
        return None

    def _classify(self) -> Dict[int, List[int]]:
        triple = self.triple
        L, D, R = triple.L, triple.D, triple.R
        cases: Dict[int, List[int]] = {c: [] for c in range(2, 7)}
        for x in self.mid:
            if x in L or x in D or x in R:
                continue
            l, r = triple.left[x], triple.right[x]
            l_blocked = l in R or l in D
            r_blocked = r in L or r in D
            if l in D and not r_blocked:
                cases[2].append(x)
            elif l in R and not r_blocked:
                cases[3].append(x)
            elif not l_blocked and r in D:
                cases[4].append(x)
            elif not l_blocked and r in L:
                cases[5].append(x)
            elif l_blocked and r_blocked:
                cases[6].append(x)
        return cases

    def _augment(self, k: int) -> Tuple[List[int], str]:
        triple = self.triple
        cases = self._classify()
        if len(cases[2]) > 3 * k:
            return self._swap(cases[2], triple.left), 'case-2 swap'
        if len(cases[4]) > 3 * k:
            return self._swap(cases[4], triple.right), 'case-4 swap'
        if len(cases[3]) > 6 * k:
            return self._reselect(cases[3], triple.left, triple.right), 'case-3 reselection'
        if len(cases[5]) > 6 * k:
            return self._reselect(cases[5], triple.right, triple.left), 'case-5 reselection'
        if len(cases[6]) > 4 * k:
            return self._rebuild(cases[6], k), 'case-6 rebuild'
        raise InvariantViolation(
            f"no extension and no case over its threshold at size {k}: "
            + ', '.join(f"case {c}: {len(v)}" for c, v in cases.items())
        )

    def _swap(self, pool: List[int], toward: Dict[int, int]) -> List[int]:
        """Replace a member d by at least two pool vertices pointing at d"""
        triple = self.triple
        for d in triple.members:
            pointing = [x for x in pool if toward[x] == d][:4]
            if len(pointing) < 4:
                continue
            base = [x for x in triple.members if x != d]
            for size in (4, 3, 2):
                for chosen in combinations(pointing, size):
                    candidate = base + list(chosen)
                    if triple.is_perfect(candidate):
                        return candidate
        return list(triple.members)

    def _reselect(self, pool: List[int], near: Dict[int, int], far: Dict[int, int]) -> List[int]:
        """Move a hub c across by trading its p members for p+1 pool vertices"""
        triple = self.triple
        hubs = sorted({far[d] for d in triple.members})
        for c in hubs:
            weight = sum(1 for d in triple.members if far[d] == c)
            attracted = [x for x in pool if near[x] == c]
            if len(attracted) < 6 * weight + 1:
                continue
            chosen = attracted[:6 * weight + 1]
            incoming: Dict[int, int] = {}
            for x in chosen:
                incoming[far[x]] = incoming.get(far[x], 0) + 1
            light = [x for x in chosen if incoming.get(x, 0) <= 1]
            source_of = {far[x]: x for x in chosen}
            picked: List[int] = []
            while light and len(picked) < weight + 1:
                x = light.pop(0)
                picked.append(x)
                dropped = {far[x], source_of.get(x)}
                light = [y for y in light if y not in dropped]
            return [d for d in triple.members if far[d] != c] + picked
        return list(triple.members)

    def _rebuild(self, pool: List[int], k: int) -> List[int]:
        """Orient a large cut of the l-r multigraph and keep the larger direction"""
        triple = self.triple
        multigraph = nx.Graph()
        for x in pool:
            a, b = triple.left[x], triple.right[x]
            weight = multigraph[a][b]['weight'] + 1 if multigraph.has_edge(a, b) else 1
            multigraph.add_edge(a, b, weight=weight)
        _, (first, _) = one_exchange(multigraph, weight='weight', seed=0)
        forward = [x for x in pool if triple.left[x] in first and triple.right[x] not in first]
        backward = [x for x in pool if triple.right[x] in first and triple.left[x] not in first]
        return forward if len(forward) >= len(backward) else backward


def perfect_triple_extract(graph: Graph, bd: BranchDecomposition, tree_edge: Tuple[int, int],
                           n: int) -> Matching:
    """
    Certify cutmim >= n in L(graph) at one tree edge of an edge decomposition

    Args:
        graph: Graph whose edges bd decomposes
        bd: Decomposition of E(graph)
        tree_edge: Tree edge (a, b) in either orientation
        n: Target size; the cut needs at least 25n - 1 mid vertices

    Returns:
        Induced matching of L(graph) across the cut, of size at least n
    """
    if bd.ground_size != graph.m:
        raise InputError(f"decomposition has {bd.ground_size} leaves but graph has {graph.m} edges")
    side = None
    for edge, mask in zip(bd.tree_edges, bd.cuts):
        if set(edge) == set(tree_edge):
            side = mask
            break
    if side is None:
        raise InputError(f"{tree_edge} is not an edge of the decomposition tree")
    return perfect_triple_from_cut(graph, side, n)


def perfect_triple_from_cut(graph: Graph, side: int, n: int) -> Matching:
    search = PerfectTripleSearch(graph, side)
    triple = search.run(n)
    pairs = [(graph.index_of(triple.left[d], d), graph.index_of(triple.right[d], d)) for d in triple.members]
    lg = line_graph(graph)
    matching = Matching(tuple(pairs), 'induced', frozenset(iter_bits(side)))
    logger.info(
        f"Perfect triple of size {triple.size} from {len(search.mid)} mid vertices"
        f"{' after ' + ', '.join(search.augmentations) if search.augmentations else ''}"
    )
    return assert_matching(lg, matching)
