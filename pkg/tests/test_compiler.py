import unittest
from itertools import combinations

import numpy as np

from core.branch_solver import BranchDecomposition, caterpillar_bd, solve_branchwidth
from core.compiler import (TreeDecompositionCompiler, alpha_bound, branching_threshold, compile_tree_decomposition,
                           extract_kP2_or_biclique, extract_semi_matching, rich_threshold)
from core.errors import InputError, PreconditionError
from core.generators import FamilySpec, generate
from core.graph import Graph
from core.tree_decomp import alpha_of, exact_tree_alpha, validate
from utils.corpus import compiler_graphs
from utils.helpers import ceil_div

STAT_KEYS = {'n', 'm', 'k', 'f', 'g', 'steps', 'loop1_iterations', 'loop2_iterations', 'bad', 'good',
             'tree_nodes', 'max_bag_size', 'alpha', 'alpha_bound', 'alpha_bound_holds', 'params_inferred'}


def family(name, *params):
    return generate(FamilySpec(name, params))


def matching_graph(size):
    """U = 0..size-1 matched to V = size..2*size-1"""
    return Graph(2 * size, tuple((i, i + size) for i in range(size)))


PLANTED_RUNS = 200
TRIPLES = ((2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 3))


def relabel(rng, n, edges, *groups):
    """Shuffle vertex names so extraction cannot lean on the layout"""
    order = rng.permutation(n)
    graph = Graph(n, tuple((int(order[u]), int(order[v])) for u, v in edges))
    return (graph,) + tuple([int(order[v]) for v in group] for group in groups)


def planted_semi_matching(rng):
    """U, V with every V vertex seeing at most j of U and |U| >= 2jl"""
    j, l = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    size_u = 2 * j * l + int(rng.integers(0, 4))
    size_v = ceil_div(size_u, j) + int(rng.integers(0, 4))
    us = list(range(size_u))
    vs = list(range(size_u, size_u + size_v))
    load = [0] * size_v
    edges = set()
    for u in us:
        edges.add((u, vs[u // j]))
        load[u // j] += 1
    for u in us:
        for i, v in enumerate(vs):
            if load[i] < j and (u, v) not in edges and rng.random() < 0.3:
                edges.add((u, v))
                load[i] += 1
    for group in (us, vs):
        for a, b in combinations(group, 2):
            if rng.random() < 0.3:
                edges.add((a, b))
    graph, U, V = relabel(rng, size_u + size_v, sorted(edges), us, vs)
    return graph, U, V, j, l


def planted_kP2_or_biclique(rng, n, m, k):
    """
    Independent U where each vertex owns an independent block of m*k^n V vertices

    Half of the instances also join every U vertex to one shared block.
    Noise edges run between different blocks and from U into foreign blocks.
    """
    need = rich_threshold(n, m, k)
    size_u = branching_threshold(n, k) + int(rng.integers(0, 3))
    shared = bool(rng.random() < 0.5)
    blocks = []
    start = size_u
    for _ in range(size_u + int(shared)):
        blocks.append(list(range(start, start + need)))
        start += need
    us = list(range(size_u))
    edges = set()
    for u in us:
        edges.update((u, v) for v in blocks[u])
        if shared:
            edges.update((u, v) for v in blocks[-1])
    owner = {v: b for b, block in enumerate(blocks) for v in block}
    for _ in range(len(owner)):
        v, w = (int(x) for x in rng.integers(size_u, start, size=2))
        if owner[v] != owner[w]:
            edges.add((min(v, w), max(v, w)))
    for b, block in enumerate(blocks):
        for u in us:
            if u != b and rng.random() < 0.1:
                edges.add((u, block[int(rng.integers(0, need))]))
    vs = [v for block in blocks for v in block]
    return relabel(rng, start, sorted(edges), us, vs)


class Thresholds(unittest.TestCase):

    def test_values(self):
        self.assertEqual(rich_threshold(2, 3, 2), 12)
        self.assertEqual(branching_threshold(2, 2), 16)
        self.assertEqual(alpha_bound(1, 1, 1), 18)
        self.assertEqual(alpha_bound(2, 2, 2), 6 * (8 + 16))


class Compile(unittest.TestCase):

    def test_corpus(self):
        for graph_id, graph in compiler_graphs(14, max_n=9, seed=3):
            with self.subTest(graph=graph_id):
                bd = solve_branchwidth(graph, 'mim').witness
                td, stats = compile_tree_decomposition(graph, bd)
                self.assertTrue(validate(graph, td)['valid'])
                self.assertTrue(stats['alpha_bound_holds'])
                self.assertEqual(stats['alpha'], alpha_of(graph, td)[0])
                self.assertGreaterEqual(stats['alpha'], exact_tree_alpha(graph)[0])
                self.assertEqual(stats['steps'], stats['bad'] + stats['good'])
                self.assertTrue(stats['params_inferred'])

    def test_statistics_keys(self):
        graph = family('cycle', 5)
        _, stats = compile_tree_decomposition(graph, caterpillar_bd(list(range(5))), n=2, m=2, k=3)
        self.assertEqual(set(stats), STAT_KEYS)
        self.assertEqual((stats['n'], stats['m'], stats['k']), (2, 2, 3))
        self.assertEqual(stats['f'], 32)
        self.assertEqual(stats['g'], 18)
        self.assertFalse(stats['params_inferred'])

    def test_tree_is_contracted(self):
        graph = family('path', 5)
        bd = caterpillar_bd(list(range(5)))
        td, stats = compile_tree_decomposition(graph, bd)
        self.assertEqual(stats['tree_nodes'], td.num_nodes)
        self.assertEqual(td.num_nodes, 2 * graph.n - 2)

    def test_incremental_matches_full_refresh(self):
        for spec in (FamilySpec('grid', (3, 3)), FamilySpec('elementary-wall', (2, 2)), FamilySpec('cycle', (8,))):
            graph = generate(spec)
            bd = caterpillar_bd(list(range(graph.n)))
            with self.subTest(spec=spec.describe()):
                fast_td, fast = compile_tree_decomposition(graph, bd, incremental=True)
                slow_td, slow = compile_tree_decomposition(graph, bd, incremental=False)
                self.assertEqual(fast_td.bags, slow_td.bags)
                self.assertEqual(fast['steps'], slow['steps'])

    def test_final_state(self):
        graph = family('grid', 3, 3)
        compiler = TreeDecompositionCompiler(graph, caterpillar_bd(list(range(graph.n))), n=2, m=2, k=3)
        td, stats = compiler.compile()
        state = compiler.state
        self.assertEqual((state.f, state.g), (stats['f'], stats['g']))
        self.assertEqual(len(state.labels), state.step)
        self.assertLessEqual(set(state.labels.values()), {'bad', 'good'})
        self.assertFalse(any(state.frontier.values()))
        for (u, node), _ in state.labels.items():
            self.assertIn(u, td.bags[node])

    def test_empty_graph(self):
        td, stats = compile_tree_decomposition(Graph(0), BranchDecomposition.trivial(0), 1, 1, 1)
        self.assertEqual(td.bags, ((),))
        self.assertEqual(stats['steps'], 0)

    def test_check_warns_on_biclique(self):
        graph = family('biclique', 2, 2)
        bd = caterpillar_bd([0, 1, 2, 3])
        with self.assertLogs('core.compiler', level='WARNING') as logs:
            compile_tree_decomposition(graph, bd, n=2, m=2, k=5, check=True)
        self.assertTrue(any('induced K_{2,2}' in line for line in logs.output))

    def test_check_warns_on_low_k(self):
        graph = family('cycle', 6)
        with self.assertLogs('core.compiler', level='WARNING'):
            compile_tree_decomposition(graph, caterpillar_bd(list(range(6))), n=1, m=10, k=1, check=True)

    def test_rejects_mismatch_and_bad_parameters(self):
        graph = family('path', 4)
        with self.assertRaises(InputError):
            compile_tree_decomposition(graph, caterpillar_bd([0, 1, 2]))
        with self.assertRaises(InputError):
            compile_tree_decomposition(graph, caterpillar_bd([0, 1, 2, 3]), n=0, m=1, k=1)


class SemiMatching(unittest.TestCase):

    def test_planted_matching(self):
        graph = matching_graph(4)
        matching = extract_semi_matching(graph, range(4), range(4, 8), 1, 2)
        self.assertEqual(matching.size, 2)
        self.assertEqual(matching.edges, ((0, 4), (1, 5)))
        self.assertEqual(matching.kind, 'induced')

    def test_degree_two_side(self):
        # every V vertex sees two U vertices
        edges = [(u, 8 + u // 2) for u in range(8)]
        graph = Graph(12, tuple(edges))
        matching = extract_semi_matching(graph, range(8), range(8, 12), 2, 2)
        self.assertEqual(matching.size, 2)
        self.assertTrue(matching.is_valid(graph))

    def test_planted_instances(self):
        rng = np.random.default_rng(11)
        for run in range(PLANTED_RUNS):
            graph, U, V, j, l = planted_semi_matching(rng)
            with self.subTest(run=run, j=j, l=l):
                matching = extract_semi_matching(graph, U, V, j, l)
                self.assertEqual(matching.size, l)
                self.assertEqual(matching.witness_cut, frozenset(U))
                self.assertEqual(matching.violations(graph), [])
                for a, b in matching.edges:
                    self.assertEqual({a in U, b in U}, {True, False})
                    self.assertIn(b if a in U else a, V)

    def test_preconditions(self):
        graph = matching_graph(4)
        with self.assertRaises(PreconditionError):
            extract_semi_matching(graph, range(4), range(4, 8), 1, 3)
        with self.assertRaises(PreconditionError):
            extract_semi_matching(graph, range(4), range(5, 8), 1, 1)
        with self.assertRaises(PreconditionError):
            extract_semi_matching(graph, range(4), range(3, 8), 1, 1)
        with self.assertRaises(InputError):
            extract_semi_matching(graph, [9], range(4, 8), 1, 1)


class MatchingOrBiclique(unittest.TestCase):

    def test_matching_branch(self):
        kind, matching = extract_kP2_or_biclique(matching_graph(4), range(4), range(4, 8), 1, 1, 1)
        self.assertEqual(kind, 'matching')
        self.assertEqual(matching.size, 1)

    def test_biclique_branch(self):
        edges = [(u, v) for u in range(8) for v in range(8, 12)]
        kind, (xs, ys) = extract_kP2_or_biclique(Graph(12, tuple(edges)), range(8), range(8, 12), 1, 2, 2)
        self.assertEqual(kind, 'biclique')
        self.assertEqual(xs, (0,))
        self.assertEqual(ys, (8, 9))

    def test_two_sided_biclique(self):
        # every U vertex sees the same four V vertices, so no induced 2P2 exists
        edges = [(u, v) for u in range(16) for v in range(16, 20)]
        kind, (xs, ys) = extract_kP2_or_biclique(Graph(20, tuple(edges)), range(16), range(16, 20), 2, 1, 2)
        self.assertEqual(kind, 'biclique')
        self.assertEqual(xs, (0, 1))
        self.assertEqual(len(ys), 1)

    def test_private_blocks_force_a_matching(self):
        # each U vertex owns four V vertices, so no two U vertices share a neighbour
        graph = Graph(80, tuple((u, 16 + 4 * u + i) for u in range(16) for i in range(4)))
        kind, matching = extract_kP2_or_biclique(graph, range(16), range(16, 80), 2, 1, 2)
        self.assertEqual(kind, 'matching')
        self.assertEqual(matching.size, 2)
        self.assertEqual(matching.edges, ((0, 16), (1, 20)))
        self.assertTrue(matching.is_valid(graph))

    def test_planted_instances(self):
        rng = np.random.default_rng(12)
        seen = set()
        for run in range(PLANTED_RUNS):
            n, m, k = TRIPLES[run % len(TRIPLES)]
            graph, U, V = planted_kP2_or_biclique(rng, n, m, k)
            with self.subTest(run=run, n=n, m=m, k=k):
                kind, result = extract_kP2_or_biclique(graph, U, V, n, m, k)
                seen.add(kind)
                if kind == 'matching':
                    self.assertEqual(result.size, k)
                    self.assertEqual(result.violations(graph), [])
                    self.assertTrue(all((a in U) != (b in U) for a, b in result.edges))
                else:
                    xs, ys = result
                    self.assertEqual((len(xs), len(ys)), (n, m))
                    self.assertTrue(set(xs) <= set(U) and set(ys) <= set(V))
                    self.assertTrue(all(graph.has_edge(x, y) for x in xs for y in ys))
                    self.assertTrue(graph.is_independent(sum(1 << y for y in ys)))
        self.assertEqual(seen, {'matching', 'biclique'})

    def test_preconditions(self):
        graph = matching_graph(4)
        with self.assertRaises(PreconditionError):
            extract_kP2_or_biclique(graph, range(3), range(4, 8), 1, 1, 1)
        with self.assertRaises(PreconditionError):
            extract_kP2_or_biclique(family('complete', 8), range(4), range(4, 8), 1, 1, 1)
        with self.assertRaises(PreconditionError):
            extract_kP2_or_biclique(graph, range(4), range(4, 8), 1, 2, 1)


if __name__ == "__main__":
    unittest.main()
