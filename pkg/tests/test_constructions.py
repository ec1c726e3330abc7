import unittest

from core.branch_solver import caterpillar_bd, solve_branchwidth, width_of
from core.constructions import (PerfectTriple, PerfectTripleSearch, contraction_transfer, odd_power_transfer,
                                perfect_triple_extract, perfect_triple_from_cut, pull_back_power_matching,
                                rook_caterpillar_bd)
from core.errors import InputError, PreconditionError
from core.generators import FamilySpec, generate
from core.graph import Graph, Matching, line_graph
from utils.helpers import ceil_div, to_mask


def family(name, *params):
    return generate(FamilySpec(name, params))


def even_edges(graph):
    return to_mask(range(0, graph.m, 2))


class RookCaterpillar(unittest.TestCase):

    def test_width_within_third_of_rows(self):
        for n, m in ((3, 3), (4, 4), (5, 3), (6, 2)):
            graph = family('rook', n, m)
            bd = rook_caterpillar_bd(n, m)
            with self.subTest(n=n, m=m):
                self.assertEqual(bd.ground_size, n * m)
                self.assertLessEqual(width_of(graph, bd, 'sim').value, ceil_div(n, 3))

    def test_two_rows_skip_empty_group(self):
        bd = rook_caterpillar_bd(2, 3)
        self.assertEqual(bd.ground_size, 6)
        self.assertLessEqual(max(len(neighbours) for neighbours in bd.adjacency), 3)

    def test_rejects_small_boards(self):
        with self.assertRaises(InputError):
            rook_caterpillar_bd(1, 4)
        with self.assertRaises(InputError):
            rook_caterpillar_bd(3, 1)


class OddPowers(unittest.TestCase):

    def test_cycle_cubed(self):
        cycle = family('cycle', 6)
        bd = solve_branchwidth(cycle, 'sim').witness
        base, lifted = odd_power_transfer(cycle, bd, 3)
        self.assertEqual(base.value, 1)
        self.assertEqual(lifted.value, 1)
        for (_, before), (_, after) in zip(base.edge_values, lifted.edge_values):
            self.assertLessEqual(after, before)

    def test_path_fifth_power(self):
        path = family('path', 7)
        bd = caterpillar_bd(list(range(7)))
        base, lifted = odd_power_transfer(path, bd, 5)
        self.assertLessEqual(lifted.value, base.value)

    def test_even_powers_refused(self):
        with self.assertRaises(InputError):
            odd_power_transfer(family('cycle', 6), caterpillar_bd(list(range(6))), 2)
        with self.assertRaises(InputError):
            odd_power_transfer(family('cycle', 6), caterpillar_bd(list(range(6))), 0)


class PullBack(unittest.TestCase):

    def setUp(self):
        # two disjoint paths 0-1-2-3 and 4-5-6-7
        self.graph = Graph(8, ((0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)))
        self.side = {0, 1, 4, 5}

    def test_first_leaving_edge(self):
        matching = Matching(((0, 3), (4, 7)), 'crossing-induced', frozenset(self.side))
        pulled = pull_back_power_matching(self.graph, 3, self.side, matching)
        self.assertEqual(pulled.edges, ((1, 2), (5, 6)))
        self.assertEqual(pulled.kind, 'crossing-induced')

    def test_rejects_non_induced_matching(self):
        matching = Matching(((0, 3), (1, 2)))
        with self.assertRaises(InputError):
            pull_back_power_matching(self.graph, 3, self.side, matching)

    def test_rejects_even_exponent(self):
        with self.assertRaises(InputError):
            pull_back_power_matching(self.graph, 2, self.side, Matching(((0, 2),)))


class ContractionTransfer(unittest.TestCase):

    def check_transfer(self, graph, u, v):
        bd = solve_branchwidth(line_graph(graph), 'sim').witness
        before = width_of(line_graph(graph), bd, 'sim').value
        contracted, transferred = contraction_transfer(graph, bd, u, v)
        self.assertEqual(transferred.ground_size, contracted.m)
        self.assertLessEqual(width_of(line_graph(contracted), transferred, 'sim').value, before)
        return contracted

    def test_complete_graph(self):
        contracted = self.check_transfer(family('complete', 4), 0, 1)
        self.assertEqual((contracted.n, contracted.m), (3, 3))

    def test_cycle(self):
        contracted = self.check_transfer(family('cycle', 5), 0, 1)
        self.assertEqual((contracted.n, contracted.m), (4, 4))

    def test_grid(self):
        self.check_transfer(family('grid', 2, 3), 0, 1)

    def test_too_few_edges(self):
        path = family('path', 3)
        with self.assertRaises(PreconditionError):
            contraction_transfer(path, caterpillar_bd([0, 1]), 0, 1)

    def test_contraction_to_single_edge(self):
        triangle = family('complete', 3)
        with self.assertRaises(PreconditionError):
            contraction_transfer(triangle, caterpillar_bd([0, 1, 2]), 0, 1)


class PerfectTriples(unittest.TestCase):

    def setUp(self):
        self.cycle = family('cycle', 60)
        self.side = even_edges(self.cycle)

    def test_every_vertex_is_mid(self):
        search = PerfectTripleSearch(self.cycle, self.side)
        self.assertEqual(len(search.mid), 60)

    def test_greedy_triple(self):
        matching = perfect_triple_from_cut(self.cycle, self.side, 2)
        self.assertEqual(matching.size, 2)
        self.assertEqual(matching.edges, ((0, 59), (2, 3)))
        self.assertTrue(matching.is_valid(line_graph(self.cycle)))

    def test_extract_from_decomposition(self):
        evens = list(range(0, 60, 2))
        odds = list(range(1, 60, 2))
        bd = caterpillar_bd(evens + odds)
        tree_edge = next(edge for edge, mask in zip(bd.tree_edges, bd.cuts)
                         if mask in (self.side, self.side ^ ((1 << 60) - 1)))
        matching = perfect_triple_extract(self.cycle, bd, tuple(reversed(tree_edge)), 2)
        self.assertEqual(matching.size, 2)

    def test_too_few_mid_vertices(self):
        cycle = family('cycle', 10)
        with self.assertRaises(PreconditionError):
            perfect_triple_from_cut(cycle, even_edges(cycle), 1)

    def test_unknown_tree_edge(self):
        bd = caterpillar_bd(list(range(60)))
        with self.assertRaises(InputError):
            perfect_triple_extract(self.cycle, bd, (500, 501), 2)

    def test_target_must_be_positive(self):
        with self.assertRaises(InputError):
            PerfectTripleSearch(self.cycle, self.side).run(0)


class AugmentedSearches(unittest.TestCase):
    """Instances where greedy growth stalls and an augmentation has to fire"""

    def setUp(self):
        # hub 0 joined inside the cut to 1..48, each i leaves the cut through (i, 48 + i)
        spokes = [(0, i) for i in range(1, 49)]
        exits = [(i, 48 + i) for i in range(1, 49)] + [(0, 97)]
        self.graph = Graph(98, tuple(spokes + exits))
        self.side = to_mask(range(len(spokes)))

    def test_hub_forces_same_side_swap(self):
        search = PerfectTripleSearch(self.graph, self.side)
        self.assertEqual(len(search.mid), 49)
        triple = search.run(2)
        self.assertEqual(search.augmentations, ['case-2 swap'])
        self.assertEqual(triple.members, [2, 3, 4, 5])
        self.assertTrue(triple.is_perfect())

    def test_hub_forces_other_side_swap(self):
        search = PerfectTripleSearch(self.graph, self.side ^ ((1 << self.graph.m) - 1))
        search.run(2)
        self.assertEqual(search.augmentations, ['case-4 swap'])

    def test_extracted_matching_is_valid(self):
        bd = caterpillar_bd(list(range(self.graph.m)))
        tree_edge = next(edge for edge, mask in zip(bd.tree_edges, bd.cuts)
                         if mask in (self.side, self.side ^ ((1 << self.graph.m) - 1)))
        with self.assertLogs('core.constructions', 'INFO') as logs:
            matching = perfect_triple_extract(self.graph, bd, tree_edge, 2)
        self.assertRegex('\n'.join(logs.output), r'case-[24] swap')
        self.assertEqual(matching.size, 4)
        self.assertTrue(matching.is_valid(line_graph(self.graph)))

    def test_small_target_needs_no_augmentation(self):
        search = PerfectTripleSearch(self.graph, self.side)
        self.assertEqual(search.run(1).members, [0])
        self.assertEqual(search.augmentations, [])

    def test_complete_graph_on_seven_vertices_is_refused(self):
        # at most 7 mid vertices, below 25n - 1 for every n >= 1
        clique = family('complete', 7)
        for n in (1, 2):
            with self.subTest(n=n):
                with self.assertRaises(PreconditionError):
                    perfect_triple_from_cut(clique, even_edges(clique), n)


class Augmentations(unittest.TestCase):

    def setUp(self):
        cycle = family('cycle', 60)
        self.search = PerfectTripleSearch(cycle, even_edges(cycle))

    def test_perfect_check(self):
        triple = PerfectTriple({1: 2, 3: 4}, {1: 5, 3: 2})
        self.assertTrue(triple.is_perfect([1]))
        self.assertFalse(triple.is_perfect([1, 3]))
        self.assertFalse(triple.is_perfect([1, 1]))

    def test_swap_replaces_member(self):
        pool = [20, 21, 22, 23]
        left = {10: 11, **{x: 10 for x in pool}}
        right = {10: 12, **{x: 30 + x for x in pool}}
        self.search.triple = PerfectTriple(left, right, [10])
        self.assertEqual(self.search._swap(pool, left), pool)

    def test_swap_without_enough_pointers(self):
        pool = [20, 21, 22]
        left = {10: 11, **{x: 10 for x in pool}}
        right = {10: 12, **{x: 30 + x for x in pool}}
        self.search.triple = PerfectTriple(left, right, [10])
        self.assertEqual(self.search._swap(pool, left), [10])

    def test_reselect_trades_hub(self):
        pool = list(range(200, 207))
        left = {1: 101, **{x: 100 for x in pool}}
        right = {1: 100, **{x: 300 + x for x in pool}}
        self.search.triple = PerfectTriple(left, right, [1])
        self.assertEqual(self.search._reselect(pool, left, right), [200, 201])

    def test_rebuild_keeps_one_direction(self):
        pool = list(range(200, 206))
        left = {x: 100 for x in pool}
        right = {x: 101 for x in pool}
        self.search.triple = PerfectTriple(left, right, [])
        self.assertEqual(sorted(self.search._rebuild(pool, 1)), pool)


if __name__ == "__main__":
    unittest.main()
