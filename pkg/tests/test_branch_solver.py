import os
import unittest
from unittest import mock

from core.branch_solver import (BranchDecomposition, caterpillar_bd, contract_degree2, enumerate_branch_decompositions,
                                line_graph_bd, solve_branchwidth, trim_leaf, width_of)
from core.constructions import rook_caterpillar_bd
from core.errors import InputError, PreconditionError, SizeCapError
from core.generators import FamilySpec, generate
from core.graph import line_graph
from tests.oracles import brute_branchwidth
from utils.corpus import connected_graphs
from utils.helpers import ceil_div


def family(name, *params):
    return generate(FamilySpec(name, params))


class Representation(unittest.TestCase):

    def test_trivial(self):
        self.assertEqual(BranchDecomposition.trivial(2).tree_edges, ((0, 1),))
        with self.assertRaises(InputError):
            BranchDecomposition.trivial(3)

    def test_rejects_degree_four(self):
        with self.assertRaises(InputError):
            BranchDecomposition(5, ((0, 1), (0, 2), (0, 3), (0, 4)), (1, 2, 3, 4))

    def test_rejects_non_bijective_leaves(self):
        with self.assertRaises(InputError):
            BranchDecomposition(4, ((0, 1), (0, 2), (0, 3)), (1, 1, 2))

    def test_caterpillar_cuts_are_prefixes(self):
        bd = caterpillar_bd([0, 1, 2, 3])
        partitions = bd.cut_partitions()
        self.assertIn((0b0001, 0b1110), partitions)
        self.assertIn((0b0011, 0b1100), partitions)
        self.assertEqual(len(partitions), 5)

    def test_caterpillar_needs_permutation(self):
        with self.assertRaises(InputError):
            caterpillar_bd([0, 0, 1])

    def test_enumeration_counts(self):
        self.assertEqual(sum(1 for _ in enumerate_branch_decompositions(4)), 3)
        self.assertEqual(sum(1 for _ in enumerate_branch_decompositions(5)), 15)


class Surgery(unittest.TestCase):

    def test_trim_leaf(self):
        bd = BranchDecomposition(4, ((0, 1), (0, 2), (0, 3)), (1, 2, 3))
        trimmed = trim_leaf(bd, 0)
        self.assertEqual(trimmed.ground_size, 2)
        self.assertEqual(len(trimmed.tree_edges), trimmed.num_nodes - 1)

    def test_trim_needs_degree_three(self):
        with self.assertRaises(PreconditionError):
            trim_leaf(BranchDecomposition.trivial(2), 0)

    def test_contract_degree2_keeps_cuts(self):
        bd = rook_caterpillar_bd(3, 3)
        contracted = contract_degree2(bd)
        self.assertLess(contracted.num_nodes, bd.num_nodes)
        self.assertEqual(set(contracted.cut_partitions()), set(bd.cut_partitions()))
        for node, neighbours in enumerate(contracted.adjacency):
            self.assertIn(len(neighbours), (1, 3))

    def test_line_graph_bd_is_identity(self):
        graph = family('cycle', 5)
        bd = caterpillar_bd(list(range(5)))
        self.assertEqual(line_graph_bd(graph, bd), bd)
        with self.assertRaises(InputError):
            line_graph_bd(family('path', 3), bd)


class Widths(unittest.TestCase):

    def test_width_of_caterpillar(self):
        report = width_of(family('path', 4), caterpillar_bd([0, 1, 2, 3]), 'mm')
        self.assertEqual(report.value, 1)
        self.assertEqual(len(report.edge_values), 5)

    def test_ground_set_mismatch(self):
        with self.assertRaises(InputError):
            width_of(family('path', 4), caterpillar_bd([0, 1, 2]), 'sim')

    def test_single_element(self):
        report = width_of(family('path', 1), BranchDecomposition.trivial(1), 'sim')
        self.assertEqual(report.value, 0)
        self.assertIsNone(report.worst_edge)

    def test_solver_matches_enumeration(self):
        for graph_id, graph in connected_graphs(5):
            for kind in ('mim', 'sim', 'rank', 'mm'):
                with self.subTest(graph=graph_id, kind=kind):
                    report = solve_branchwidth(graph, kind)
                    self.assertEqual(report.value, brute_branchwidth(graph, kind))
                    self.assertEqual(width_of(graph, report.witness, kind).value, report.value)
            if graph.m <= 6:
                with self.subTest(graph=graph_id, kind='eta'):
                    self.assertEqual(solve_branchwidth(graph, 'eta').value, brute_branchwidth(graph, 'eta'))

    def test_threshold_search_agrees_with_dp(self):
        for graph_id, graph in connected_graphs(5, min_n=4):
            with self.subTest(graph=graph_id):
                self.assertEqual(solve_branchwidth(graph, 'sim', prune=True).value,
                                 solve_branchwidth(graph, 'sim', prune=False).value)

    def test_branchwidth_of_cliques(self):
        for n in range(3, 8):
            with self.subTest(n=n):
                self.assertEqual(solve_branchwidth(family('complete', n), 'eta').value, ceil_div(2 * n, 3))

    def test_cycle_values(self):
        cycle = family('cycle', 6)
        self.assertEqual(solve_branchwidth(cycle, 'eta').value, 2)
        self.assertEqual(solve_branchwidth(cycle, 'mm').value, 2)
        self.assertEqual(solve_branchwidth(line_graph(cycle), 'sim').value, 1)


class Caps(unittest.TestCase):

    def test_default_cap(self):
        with self.assertRaises(SizeCapError):
            solve_branchwidth(family('path', 13), 'mim')

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_CAP': '3'}):
            with self.assertRaises(SizeCapError):
                solve_branchwidth(family('path', 4), 'sim')

    def test_eta_cap_admits_k7_and_refuses_k8(self):
        self.assertEqual(solve_branchwidth(family('complete', 7), 'eta').value, 5)
        with self.assertRaises(SizeCapError):
            solve_branchwidth(family('complete', 8), 'eta')

    def test_eta_specific_override(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_CAP_ETA': '5'}):
            with self.assertRaises(SizeCapError):
                solve_branchwidth(family('complete', 4), 'eta')


if __name__ == "__main__":
    unittest.main()
