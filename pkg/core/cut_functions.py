"""
Cut functions
Symmetric set functions on vertex or edge bipartitions, memoized per instance
"""

import logging
from typing import Dict, Iterable, Optional, Union

import numpy as np

from core.errors import InputError, InvariantViolation
from core.graph import Graph
from core.subroutines import crossing_matching_pairs, induced_matching_pairs
from utils.helpers import get_log_level, iter_bits, popcount

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

VERTEX_KINDS = ('mim', 'sim', 'rank', 'mm')
EDGE_KINDS = ('eta',)
KINDS = VERTEX_KINDS + EDGE_KINDS

Part = Union[int, Iterable[int]]


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over GF(2) by Gaussian elimination on a 0/1 matrix"""
    rows = np.array(matrix, dtype=np.uint8) & 1
    n_rows, n_cols = rows.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivots = np.nonzero(rows[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + pivots[0]
        if pivot != rank:
            rows[[rank, pivot]] = rows[[pivot, rank]]
        below = np.nonzero(rows[:, col])[0]
        below = below[below != rank]
        rows[below] ^= rows[rank]
        rank += 1
    return rank


class CutFunction:
    """
    One of the five symmetric cut functions bound to a graph

    Vertex kinds take subsets of V(G); 'eta' takes subsets of edge indices.
    """

    def __init__(self, kind: str, graph: Graph):
        """
        Initialize the cut function

        Args:
            kind: 'mim', 'sim', 'rank', 'mm' or 'eta'
            graph: Graph the function is evaluated on
        """
        if kind not in KINDS:
            raise InputError(f"unknown cut function {kind!r}; expected one of {KINDS}")
        self.kind = kind
        self.graph = graph
        self.ground_size = graph.m if kind == 'eta' else graph.n
        self.full_mask = (1 << self.ground_size) - 1
        self.logger = logger
        # single-writer memo; one instance per solver run
        self._memo: Dict[int, int] = {}

        if kind == 'rank':
            matrix = np.zeros((graph.n, graph.n), dtype=np.uint8)
            for u, v in graph.edges:
                matrix[u, v] = matrix[v, u] = 1
            self._matrix = matrix
        if kind == 'eta':
            self._endpoint_masks = [(1 << u) | (1 << v) for u, v in graph.edges]

    def to_mask(self, part: Part) -> int:
        if isinstance(part, int):
            if part < 0 or part & ~self.full_mask:
                raise InputError(f"part mask {part:#x} is outside the ground set of size {self.ground_size}")
            return part
        mask = 0
        for x in part:
            if not 0 <= x < self.ground_size:
                raise InputError(f"element {x} is outside the ground set of size {self.ground_size}")
            mask |= 1 << x
        return mask

    def evaluate(self, part: Part) -> int:
        """
        Value of the function on the bipartition (part, complement)

        Args:
            part: Element set as a bit mask or an iterable of ids

        Returns:
            Non-negative integer value
        """
        mask = self.to_mask(part)
        hit = self._memo.get(mask)
        if hit is not None:
            return hit
        value = self._compute(mask)
        self._memo[mask] = value
        return value

    __call__ = evaluate

    def _compute(self, mask: int) -> int:
        complement = self.full_mask & ~mask
        if mask == 0 or complement == 0:
            return 0
        if self.kind == 'mim':
            return len(induced_matching_pairs(self.graph, mask, 'bipartite-cut'))
        if self.kind == 'sim':
            return len(induced_matching_pairs(self.graph, mask, 'full-graph'))
        if self.kind == 'mm':
            return len(crossing_matching_pairs(self.graph, mask))
        if self.kind == 'rank':
            rows = list(iter_bits(mask))
            cols = list(iter_bits(complement))
            return gf2_rank(self._matrix[np.ix_(rows, cols)])
        return popcount(self._cover(mask) & self._cover(complement))

    def _cover(self, edge_mask: int) -> int:
        covered = 0
        for i in iter_bits(edge_mask):
            covered |= self._endpoint_masks[i]
        return covered

    def values_table(self) -> list:
        """Value of every subset, indexed by mask; only for small ground sets"""
        return [self.evaluate(mask) for mask in range(1 << self.ground_size)]

    def clear(self):
        self._memo.clear()


def evaluate(kind: str, graph: Graph, part: Part) -> int:
    return CutFunction(kind, graph).evaluate(part)


def assert_symmetry(function: CutFunction, parts: Optional[Iterable[int]] = None) -> int:
    """
    Check f(X) == f(complement of X)

    Args:
        function: Cut function under test
        parts: Masks to check (default: every subset)

    Returns:
        Number of subsets checked
    """
    if parts is None:
        parts = range(1 << function.ground_size)
    checked = 0
    for mask in parts:
        complement = function.full_mask & ~mask
        a = function._compute(mask)
        b = function._compute(complement)
        if a != b:
            raise InvariantViolation(
                f"{function.kind} is not symmetric: f({mask:#x})={a} but f({complement:#x})={b}"
            )
        checked += 1
    return checked
