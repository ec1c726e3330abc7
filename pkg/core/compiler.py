"""
Tree decomposition compiler
Turns a branch decomposition of small mim-width of a biclique-free graph into a
tree decomposition of bounded independence number, plus the two witness
extractors its analysis rests on
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple, Union

from core.branch_solver import BranchDecomposition, contract_degree2, width_of
from core.errors import InputError, InvariantViolation, PreconditionError
from core.graph import Graph, Matching, assert_matching
from core.subroutines import find_induced_biclique, independent_set_of_size, induced_biclique_number
from core.tree_decomp import TreeDecomposition, alpha_of, validate
from utils.helpers import bits_to_list, get_log_level, iter_bits, lowest_bit, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]

# largest biclique side searched when n and m are inferred
MAX_INFERRED_BICLIQUE = 4


def rich_threshold(n: int, m: int, k: int) -> int:
    """g_m(n, k) = m * k^n"""
    return m * k ** n


def branching_threshold(n: int, k: int) -> int:
    """f(n, k) = 2^(n + k)"""
    return 2 ** (n + k)


def alpha_bound(n: int, m: int, k: int) -> int:
    """Strict upper bound on the independence number of a compiled decomposition"""
    return 6 * (2 ** (n + k - 1) + m * k ** (n + 1))


@dataclass
class CompilerState:
    """
    Mutable state of one compile run

    frontier maps a triple (u, a, b), where tree edge ab touches T_u at a,
    to N(u, b, a): neighbours of u outside X_a hosted by the b side.
    """

    n: int
    m: int
    k: int
    bags: List[int]
    step: int = 0
    labels: Dict[Tuple[int, int], str] = field(default_factory=dict)
    frontier: Dict[Triple, int] = field(default_factory=dict)
    bad_insertions: int = 0
    good_insertions: int = 0

    @property
    def g(self) -> int:
        return rich_threshold(self.n, self.m, self.k)

    @property
    def f(self) -> int:
        return branching_threshold(self.n, self.k)

    def holds(self, node: int, u: int) -> bool:
        return bool(self.bags[node] >> u & 1)


class TreeDecompositionCompiler:
    """Two-loop bag growth over the tree of a branch decomposition"""

    def __init__(self, graph: Graph, bd: BranchDecomposition,
                 n: Optional[int] = None, m: Optional[int] = None, k: Optional[int] = None,
                 check: bool = False, incremental: bool = True):
        """
        Initialize the compiler

        Args:
            graph: Graph to decompose
            bd: Branch decomposition of V(graph)
            n, m: Induced K_{n,m} assumed absent (inferred when omitted)
            k: mim-width of bd is assumed below k (inferred when omitted)
            check: Verify the assumptions and warn when they fail
            incremental: Refresh only affected frontiers (False recomputes all)
        """
        if bd.ground_size != graph.n:
            raise InputError(f"decomposition has {bd.ground_size} leaves but graph has {graph.n} vertices")
        self.graph = graph
        self.bd = bd
        self.check = check
        self.incremental = incremental
        self.logger = logger
        self.params_inferred = n is None or m is None or k is None
        self.n, self.m, self.k = self._resolve_parameters(n, m, k)
        for name, value in (('n', self.n), ('m', self.m), ('k', self.k)):
            if value < 1:
                raise InputError(f"{name} must be a positive integer, got {value}")

    def _resolve_parameters(self, n, m, k) -> Tuple[int, int, int]:
        if n is None or m is None:
            t = induced_biclique_number(self.graph, MAX_INFERRED_BICLIQUE) + 1
            n = t if n is None else n
            m = t if m is None else m
        mim_width = None
        if k is None:
            mim_width = width_of(self.graph, self.bd, 'mim').value
            k = mim_width + 1
        if self.check:
            if mim_width is None:
                mim_width = width_of(self.graph, self.bd, 'mim').value
            if mim_width >= k:
                self.logger.warning(f"mim-width of the decomposition is {mim_width}, not below k={k}")
            witness = find_induced_biclique(self.graph, n, m)
            if witness is not None:
                self.logger.warning(f"graph has an induced K_{{{n},{m}}}: {witness}")
        return n, m, k

    def compile(self) -> Tuple[TreeDecomposition, Dict]:
        """
        Run both loops and assemble the decomposition

        Returns:
            (tree decomposition on the contracted tree, statistics dictionary)
        """
        graph = self.graph
        if graph.n == 0:
            td = TreeDecomposition(((),), (), 0)
            return td, self._statistics(td, None, 0, 0)

        tree = contract_degree2(self.bd)
        self.tree = tree
        self.hosted = self._hosted_masks(tree)
        bags = [0] * tree.num_nodes
        for v, node in enumerate(tree.leaf_of):
            bags[node] = 1 << v
        state = CompilerState(self.n, self.m, self.k, bags)
        self.state = state
        self._refresh_all()

        iteration_cap = graph.n * tree.num_nodes
        rich_cache: Dict[int, bool] = {}

        def rich(mask: int) -> bool:
            if mask not in rich_cache:
                rich_cache[mask] = independent_set_of_size(graph.adjacency, mask, state.g) is not None
            return rich_cache[mask]

        loop1 = 0
        while True:
            triple = self._smallest(lambda mask: rich(mask))
            if triple is None:
                break
            self._insert(triple, 'bad')
            loop1 += 1
            if state.step > iteration_cap:
                raise InvariantViolation(f"compiler exceeded {iteration_cap} iterations")

        loop2 = 0
        while True:
            triple = self._smallest(lambda mask: mask != 0)
            if triple is None:
                break
            if rich(state.frontier[triple]):
                raise InvariantViolation(f"second loop met a rich frontier at {triple}")
            self._insert(triple, 'good')
            loop2 += 1
            if state.step > iteration_cap:
                raise InvariantViolation(f"compiler exceeded {iteration_cap} iterations")

        td = TreeDecomposition(tuple(tuple(bits_to_list(b)) for b in state.bags), tree.tree_edges, graph.n)
        report = validate(graph, td)
        if not report['valid']:
            raise InvariantViolation(f"compiled decomposition is invalid: {report['violations'][0]['message']}")
        stats = self._statistics(td, alpha_of(graph, td), loop1, loop2)
        if not stats['alpha_bound_holds']:
            self.logger.warning(
                f"alpha {stats['alpha']} reaches the bound {stats['alpha_bound']}; "
                f"the graph is not K_{{{self.n},{self.m}}}-free or mim-width is not below {self.k}"
            )
        self.logger.info(
            f"Compiled {graph.n}-vertex graph in {state.step} steps "
            f"({state.bad_insertions} bad, {state.good_insertions} good), alpha {stats['alpha']}"
        )
        return td, stats

    def _hosted_masks(self, tree: BranchDecomposition) -> Dict[Tuple[int, int], int]:
        """hosted[(b, a)]: vertices whose leaves lie on b's side of tree edge ab"""
        full = self.graph.full_mask
        hosted = {}
        for (a, b), side_b in zip(tree.tree_edges, tree.cuts):
            hosted[(b, a)] = side_b
            hosted[(a, b)] = full & ~side_b
        return hosted

    def _triples_of(self, u: int) -> Dict[Triple, int]:
        state = self.state
        adjacency_u = self.graph.adjacency[u]
        found = {}
        for a in range(self.tree.num_nodes):
            if not state.holds(a, u):
                continue
            for b in self.tree.adjacency[a]:
                if state.holds(b, u):
                    continue
                found[(u, a, b)] = adjacency_u & ~state.bags[a] & self.hosted[(b, a)]
        return found

    def _refresh_all(self):
        self.state.frontier = {}
        for u in range(self.graph.n):
            self.state.frontier.update(self._triples_of(u))

    def _smallest(self, predicate) -> Optional[Triple]:
        for triple in sorted(self.state.frontier):
            if predicate(self.state.frontier[triple]):
                return triple
        return None

    def _insert(self, triple: Triple, label: str):
        state = self.state
        u, a, b = triple
        state.bags[b] |= 1 << u
        state.labels[(u, b)] = label
        state.step += 1
        if label == 'bad':
            state.bad_insertions += 1
        else:
            state.good_insertions += 1
        self.logger.debug(f"step {state.step}: {label} vertex {u} into bag {b} via edge ({a}, {b})")

        if not self.incremental:
            self._refresh_all()
            return
        # only u's own triples and triples whose X_a is the grown bag change
        frontier = state.frontier
        for key in [key for key in frontier if key[0] == u]:
            del frontier[key]
        frontier.update(self._triples_of(u))
        for key in [key for key in frontier if key[1] == b and key[0] != u]:
            v, _, c = key
            frontier[key] = self.graph.adjacency[v] & ~state.bags[b] & self.hosted[(c, b)]

    def _statistics(self, td: TreeDecomposition, alpha: Optional[Tuple[int, Optional[int]]],
                    loop1: int, loop2: int) -> Dict:
        state = getattr(self, 'state', None)
        bound = alpha_bound(self.n, self.m, self.k)
        value = 0 if alpha is None else alpha[0]
        return {
            'n': self.n,
            'm': self.m,
            'k': self.k,
            'f': branching_threshold(self.n, self.k),
            'g': rich_threshold(self.n, self.m, self.k),
            'steps': 0 if state is None else state.step,
            'loop1_iterations': loop1,
            'loop2_iterations': loop2,
            'bad': 0 if state is None else state.bad_insertions,
            'good': 0 if state is None else state.good_insertions,
            'tree_nodes': td.num_nodes,
            'max_bag_size': td.max_bag_size,
            'alpha': value,
            'alpha_bound': bound,
            'alpha_bound_holds': value < bound,
            'params_inferred': self.params_inferred,
        }


def compile_tree_decomposition(graph: Graph, bd: BranchDecomposition, n: Optional[int] = None,
                               m: Optional[int] = None, k: Optional[int] = None,
                               check: bool = False, incremental: bool = True) -> Tuple[TreeDecomposition, Dict]:
    compiler = TreeDecompositionCompiler(graph, bd, n, m, k, check, incremental)
    return compiler.compile()


def _vertex_mask(graph: Graph, vertices: Iterable[int], name: str) -> int:
    mask = 0
    for v in vertices:
        if not 0 <= v < graph.n:
            raise InputError(f"{name} mentions {v}, which is not a vertex")
        mask |= 1 << v
    return mask


def extract_semi_matching(graph: Graph, U: Iterable[int], V: Iterable[int], j: int, l: int) -> Matching:
    """
    Find X in U, Y in V with G[X, Y] an induced matching of size l

    Args:
        graph: Host graph
        U: Vertices with at least one neighbour in V
        V: Vertices with at most j neighbours in U
        j: Degree bound on V
        l: Requested matching size; |U| >= 2jl

    Returns:
        Matching of kind 'induced' whose witness cut is U
    """
    u_mask = _vertex_mask(graph, U, 'U')
    v_mask = _vertex_mask(graph, V, 'V')
    adjacency = graph.adjacency
    if j < 1 or l < 1:
        raise PreconditionError(f"j and l must be positive, got j={j}, l={l}")
    if u_mask & v_mask:
        raise PreconditionError("U and V must be disjoint")
    for u in iter_bits(u_mask):
        if not adjacency[u] & v_mask:
            raise PreconditionError(f"vertex {u} of U has no neighbour in V")
    for v in iter_bits(v_mask):
        if popcount(adjacency[v] & u_mask) > j:
            raise PreconditionError(f"vertex {v} of V has more than j={j} neighbours in U")
    if popcount(u_mask) < 2 * j * l:
        raise PreconditionError(f"|U| = {popcount(u_mask)} is below 2jl = {2 * j * l}")

    pairs = []
    left, right = u_mask, v_mask
    for _ in range(l):
        x = min(iter_bits(left), key=lambda u: (popcount(adjacency[u] & right), u))
        near = adjacency[x] & right
        y = lowest_bit(near)
        pairs.append((x, y))
        differing = 0
        for u in iter_bits(left & ~(1 << x)):
            if adjacency[u] & right != near:
                differing |= 1 << u
        left = differing & ~adjacency[y]
        right = right & ~near

    matching = Matching(tuple(pairs), 'induced', frozenset(iter_bits(u_mask)))
    return assert_matching(graph, matching)


BicliqueWitness = Tuple[Tuple[int, ...], Tuple[int, ...]]


def extract_kP2_or_biclique(graph: Graph, U: Iterable[int], V: Iterable[int],
                            n: int, m: int, k: int) -> Tuple[str, Union[Matching, BicliqueWitness]]:
    """
    Either an induced matching of size k between U and V, or an induced K_{n,m}

    Args:
        graph: Host graph
        U: Independent set with at least 2^(n+k) vertices
        V: Disjoint from U; every u in U has alpha(N_V(u)) >= m * k^n
        n, m, k: Positive integers

    Returns:
        ('matching', Matching) or ('biclique', (X, Y))
    """
    u_mask = _vertex_mask(graph, U, 'U')
    v_mask = _vertex_mask(graph, V, 'V')
    adjacency = graph.adjacency
    if min(n, m, k) < 1:
        raise PreconditionError(f"n, m, k must be positive, got ({n}, {m}, {k})")
    if u_mask & v_mask:
        raise PreconditionError("U and V must be disjoint")
    if not graph.is_independent(u_mask):
        raise PreconditionError("U must be an independent set")
    if popcount(u_mask) < branching_threshold(n, k):
        raise PreconditionError(f"|U| = {popcount(u_mask)} is below 2^(n+k) = {branching_threshold(n, k)}")
    need = rich_threshold(n, m, k)
    for u in iter_bits(u_mask):
        if independent_set_of_size(adjacency, adjacency[u] & v_mask, need) is None:
            raise PreconditionError(f"alpha(N_V({u})) is below m*k^n = {need}")

    kind, result = _double_induction(graph, u_mask, v_mask, n, m, k)
    if kind == 'matching':
        matching = Matching(tuple(result), 'induced', frozenset(iter_bits(u_mask)))
        return kind, assert_matching(graph, matching)

    xs, ys = result
    witness = (tuple(bits_to_list(xs)), tuple(bits_to_list(ys)))
    if popcount(xs) != n or popcount(ys) != m or not graph.is_independent(xs) or not graph.is_independent(ys):
        raise InvariantViolation(f"biclique witness {witness} has the wrong shape")
    for x in iter_bits(xs):
        if adjacency[x] & ys != ys:
            raise InvariantViolation(f"biclique witness {witness} is not complete")
    return kind, witness


def _double_induction(graph: Graph, u_mask: int, v_mask: int, n: int, m: int, k: int):
    adjacency = graph.adjacency

    if k == 1:
        u = lowest_bit(u_mask)
        return 'matching', [(u, lowest_bit(adjacency[u] & v_mask))]
    if n == 1:
        u = lowest_bit(u_mask)
        ys = independent_set_of_size(adjacency, adjacency[u] & v_mask, m)
        return 'biclique', (1 << u, ys)

    x = lowest_bit(u_mask)
    inner = adjacency[x] & v_mask
    smaller = rich_threshold(n - 1, m, k)
    keep, poor = 0, 0
    for u in iter_bits(u_mask & ~(1 << x)):
        if independent_set_of_size(adjacency, adjacency[u] & inner, smaller) is not None:
            keep |= 1 << u
        else:
            poor |= 1 << u

    if popcount(keep) >= branching_threshold(n - 1, k):
        kind, result = _double_induction(graph, keep, inner, n - 1, m, k)
        if kind == 'matching':
            return kind, result
        xs, ys = result
        return kind, (xs | (1 << x), ys)

    kind, result = _double_induction(graph, poor, v_mask & ~inner, n, m, k - 1)
    if kind == 'biclique':
        return kind, result
    blocked = 0
    for a, _ in result:
        blocked |= adjacency[a]
    spread = independent_set_of_size(adjacency, inner, rich_threshold(n, m, k))
    if spread is None or not spread & ~blocked:
        raise InvariantViolation("no neighbour of the pivot avoids the smaller matching")
    return 'matching', result + [(x, lowest_bit(spread & ~blocked))]
