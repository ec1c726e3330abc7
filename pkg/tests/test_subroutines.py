import unittest
from fractions import Fraction

from core.errors import InputError
from core.generators import FamilySpec, generate
from core.graph import Graph
from core.subroutines import (degeneracy, find_induced_biclique, independence_number, induced_biclique_number,
                              max_average_degree, max_induced_matching, max_matching)
from tests.oracles import brute_alpha, brute_induced_matching
from utils.corpus import connected_graphs, random_graphs
from utils.helpers import ceil_div


def family(name, *params):
    return generate(FamilySpec(name, params))


class Matchings(unittest.TestCase):

    def test_max_matching(self):
        self.assertEqual(max_matching(family('cycle', 5)).size, 2)
        self.assertEqual(max_matching(family('biclique', 3, 3)).size, 3)

    def test_max_matching_across_cut(self):
        matching = max_matching(family('cycle', 4), cut=[0, 1])
        self.assertEqual(matching.size, 2)

    def test_max_induced_matching_small_values(self):
        self.assertEqual(max_induced_matching(family('path', 5)).size, 2)
        self.assertEqual(max_induced_matching(family('cycle', 5)).size, 1)
        self.assertEqual(max_induced_matching(family('cycle', 6)).size, 2)

    def test_ties_go_to_smallest_edge_list(self):
        cycle = family('cycle', 6)
        shuffled = Graph(6, tuple(reversed(cycle.edges)))
        for graph in (cycle, shuffled):
            self.assertEqual(max_induced_matching(graph).edges, ((0, 1), (3, 4)))
        # the crossing edges of the square are (0, 3) and (1, 2)
        square = family('cycle', 4)
        self.assertEqual(max_induced_matching(square, cut=[0, 1], mode='full-graph').edges, ((0, 3),))

    def test_modes_differ_on_square(self):
        square = family('cycle', 4)
        bipartite = max_induced_matching(square, cut=[0, 1], mode='bipartite-cut')
        whole = max_induced_matching(square, cut=[0, 1], mode='full-graph')
        self.assertEqual(bipartite.size, 2)
        self.assertEqual(bipartite.kind, 'induced')
        self.assertEqual(whole.size, 1)
        self.assertEqual(whole.kind, 'crossing-induced')

    def test_unknown_mode(self):
        with self.assertRaises(InputError):
            max_induced_matching(family('path', 3), cut=[0], mode='loose')

    def test_cut_outside_graph(self):
        with self.assertRaises(InputError):
            max_induced_matching(family('path', 3), cut=[7])

    def test_induced_matching_against_enumeration(self):
        for graph_id, graph in connected_graphs(5):
            with self.subTest(graph=graph_id):
                self.assertEqual(max_induced_matching(graph).size, brute_induced_matching(graph))
                side = list(range(0, graph.n, 2))
                for mode in ('full-graph', 'bipartite-cut'):
                    self.assertEqual(max_induced_matching(graph, side, mode).size,
                                     brute_induced_matching(graph, side, mode))

    def test_layered_counterexample(self):
        for d in range(1, 4):
            graph = family('degeneracy-counterexample', d)
            self.assertEqual(max_matching(graph).size, 2 * d)
            self.assertEqual(max_induced_matching(graph).size, 1)
            self.assertEqual(degeneracy(graph)[0], d)

    def test_degenerate_graphs_have_large_induced_matchings(self):
        corpus = connected_graphs(7, min_n=2) + random_graphs(500, 12, seed=7)
        for graph_id, graph in corpus:
            d, _ = degeneracy(graph)
            if d == 0:
                continue
            with self.subTest(graph=graph_id):
                mu = max_matching(graph).size
                self.assertGreaterEqual(max_induced_matching(graph).size, ceil_div(mu, 4 * d - 1))


class Independence(unittest.TestCase):

    def test_independence_number(self):
        value, witness = independence_number(family('cycle', 5))
        self.assertEqual(value, 2)
        self.assertEqual(len(witness), 2)
        self.assertFalse(family('cycle', 5).has_edge(*witness))

    def test_independence_within_subset(self):
        value, witness = independence_number(family('complete', 4), within=[0, 1])
        self.assertEqual(value, 1)

    def test_matches_enumeration(self):
        for graph_id, graph in random_graphs(20, 8, seed=3):
            with self.subTest(graph=graph_id):
                self.assertEqual(independence_number(graph)[0], brute_alpha(graph, graph.vertices))


class Degeneracy(unittest.TestCase):

    def test_values(self):
        self.assertEqual(degeneracy(family('complete', 4))[0], 3)
        self.assertEqual(degeneracy(family('path', 5))[0], 1)
        self.assertEqual(degeneracy(Graph(3))[0], 0)

    def test_order_covers_vertices(self):
        _, order = degeneracy(family('grid', 3, 3))
        self.assertEqual(sorted(order), list(range(9)))


class Bicliques(unittest.TestCase):

    def test_find_in_biclique(self):
        X, Y = find_induced_biclique(family('biclique', 2, 3), 2, 3)
        self.assertEqual(len(X), 2)
        self.assertEqual(len(Y), 3)

    def test_five_cycle_is_square_free(self):
        self.assertIsNone(find_induced_biclique(family('cycle', 5), 2, 2))
        self.assertIsNotNone(find_induced_biclique(family('cycle', 4), 2, 2))

    def test_biclique_number(self):
        self.assertEqual(induced_biclique_number(family('biclique', 3, 3)), 3)
        self.assertEqual(induced_biclique_number(family('complete', 4)), 1)
        self.assertEqual(induced_biclique_number(Graph(3)), 0)

    def test_sides_must_be_positive(self):
        with self.assertRaises(InputError):
            find_induced_biclique(family('path', 3), 0, 1)


class AverageDegree(unittest.TestCase):

    def test_values(self):
        self.assertEqual(max_average_degree(family('complete', 4)), Fraction(3))
        self.assertEqual(max_average_degree(family('path', 3)), Fraction(4, 3))
        self.assertEqual(max_average_degree(Graph(0)), Fraction(0))


if __name__ == "__main__":
    unittest.main()
