"""
Text formats for graphs, branch decompositions and tree decompositions
All ids in files are 1-based; everything in memory is 0-based
"""

import logging
from typing import Dict, Iterator, List, Optional, Tuple

from core.branch_solver import BranchDecomposition
from core.errors import InputError, ParseError
from core.graph import Graph
from core.tree_decomp import TreeDecomposition, validate
from utils.helpers import get_log_level

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, tokens) for every non-blank, non-comment line"""
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == 'c':
            continue
        yield number, tokens


def _integers(tokens: List[str], number: int) -> List[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", number)


def _vertex(raw: int, count: int, number: int, what: str = 'vertex') -> int:
    if not 1 <= raw <= count:
        raise ParseError(f"{what} {raw} outside 1..{count}", number)
    return raw - 1


def parse_graph(text: str) -> Graph:
    """
    Parse a DIMACS-style edge list

    Args:
        text: "p edge <n> <m>" followed by m lines "e <u> <v>"; "c" lines are comments

    Returns:
        Graph with edges in file order
    """
    header: Optional[Tuple[int, int, int]] = None
    edges: List[Tuple[int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}
    for number, tokens in _lines(text):
        kind = tokens[0]
        if kind == 'p':
            if header is not None:
                raise ParseError("second 'p' header", number)
            if len(tokens) != 4 or tokens[1] != 'edge':
                raise ParseError("header must read 'p edge <n> <m>'", number)
            n, m = _integers(tokens[2:], number)
            if n < 0 or m < 0:
                raise ParseError("header counts must be non-negative", number)
            header = (n, m, number)
        elif kind == 'e':
            if header is None:
                raise ParseError("edge line before the 'p' header", number)
            if len(tokens) != 3:
                raise ParseError("edge line must read 'e <u> <v>'", number)
            raw_u, raw_v = _integers(tokens[1:], number)
            u, v = _vertex(raw_u, header[0], number), _vertex(raw_v, header[0], number)
            if u == v:
                raise ParseError(f"self-loop at vertex {raw_u}", number)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(f"duplicate edge {raw_u} {raw_v} (first on line {seen[key]})", number)
            seen[key] = number
            edges.append((u, v))
        else:
            raise ParseError(f"unknown line type {kind!r}", number)

    if header is None:
        raise ParseError("missing 'p edge <n> <m>' header")
    n, m, number = header
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, found {len(edges)}", number)
    return Graph(n, tuple(edges))


def serialize_graph(graph: Graph) -> str:
    lines = [f"p edge {graph.n} {graph.m}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges)
    return '\n'.join(lines) + '\n'


def parse_bd(text: str) -> BranchDecomposition:
    """
    Parse a branch decomposition

    Args:
        text: "s bd <tree-nodes> <elements>", tree edges "e <i> <j>" and leaf
            lines "l <tree-node> <element>"

    Returns:
        BranchDecomposition with the subcubic and bijection checks applied
    """
    header: Optional[Tuple[int, int, int]] = None
    edges: List[Tuple[int, int]] = []
    leaf_of: Dict[int, int] = {}
    holder: Dict[int, int] = {}
    degree: Dict[int, int] = {}
    for number, tokens in _lines(text):
        kind = tokens[0]
        if kind == 's':
            if header is not None:
                raise ParseError("second 's' header", number)
            if len(tokens) != 4 or tokens[1] != 'bd':
                raise ParseError("header must read 's bd <tree-nodes> <elements>'", number)
            nodes, elements = _integers(tokens[2:], number)
            if nodes < 0 or elements < 0:
                raise ParseError("header counts must be non-negative", number)
            header = (nodes, elements, number)
            continue
        if header is None:
            raise ParseError(f"'{kind}' line before the 's bd' header", number)
        nodes, elements, _ = header
        if kind == 'e':
            if len(tokens) != 3:
                raise ParseError("tree edge must read 'e <i> <j>'", number)
            a, b = (_vertex(x, nodes, number, 'tree node') for x in _integers(tokens[1:], number))
            for x in (a, b):
                degree[x] = degree.get(x, 0) + 1
                if degree[x] > 3:
                    raise ParseError(f"tree node {x + 1} has degree above 3", number)
            edges.append((a, b))
        elif kind == 'l':
            if len(tokens) != 3:
                raise ParseError("leaf line must read 'l <tree-node> <element>'", number)
            raw_node, raw_element = _integers(tokens[1:], number)
            node = _vertex(raw_node, nodes, number, 'tree node')
            element = _vertex(raw_element, elements, number, 'element')
            if element in leaf_of:
                raise ParseError(f"element {raw_element} is mapped twice", number)
            if node in holder:
                raise ParseError(f"tree node {raw_node} already holds element {holder[node] + 1}", number)
            leaf_of[element] = node
            holder[node] = element
        else:
            raise ParseError(f"unknown line type {kind!r}", number)

    if header is None:
        raise ParseError("missing 's bd <tree-nodes> <elements>' header")
    nodes, elements, number = header
    if len(leaf_of) != elements:
        missing = min(set(range(elements)) - set(leaf_of))
        raise ParseError(f"element {missing + 1} has no leaf", number)
    for element, node in leaf_of.items():
        if degree.get(node, 0) > 1:
            raise ParseError(f"element {element + 1} sits on tree node {node + 1}, which is not a leaf", number)
    try:
        return BranchDecomposition(nodes, tuple(edges), tuple(leaf_of[x] for x in range(elements)))
    except InputError as e:
        raise ParseError(str(e), number)


def serialize_bd(bd: BranchDecomposition) -> str:
    lines = [f"s bd {bd.num_nodes} {bd.ground_size}"]
    lines.extend(f"e {a + 1} {b + 1}" for a, b in bd.tree_edges)
    lines.extend(f"l {node + 1} {element + 1}" for element, node in enumerate(bd.leaf_of))
    return '\n'.join(lines) + '\n'


def parse_td(text: str, graph: Optional[Graph] = None) -> TreeDecomposition:
    """
    Parse a PACE-style tree decomposition

    Args:
        text: "s td <bags> <max-bag-size> <n>", bag lines "b <id> <v...>",
            then tree edges "<i> <j>"
        graph: When given, the decomposition is validated against it

    Returns:
        TreeDecomposition with 0-based bags and nodes
    """
    header: Optional[Tuple[int, int, int, int]] = None
    bags: Dict[int, Tuple[int, ...]] = {}
    edges: List[Tuple[int, int]] = []
    for number, tokens in _lines(text):
        kind = tokens[0]
        if kind == 's':
            if header is not None:
                raise ParseError("second 's' header", number)
            if len(tokens) != 5 or tokens[1] != 'td':
                raise ParseError("header must read 's td <bags> <max-bag-size> <n>'", number)
            count, widest, n = _integers(tokens[2:], number)
            if min(count, widest, n) < 0:
                raise ParseError("header counts must be non-negative", number)
            header = (count, widest, n, number)
            continue
        if header is None:
            raise ParseError("line before the 's td' header", number)
        count, _, n, _ = header
        if kind == 'b':
            values = _integers(tokens[1:], number)
            if not values:
                raise ParseError("bag line needs an id", number)
            node = _vertex(values[0], count, number, 'bag id')
            if node in bags:
                raise ParseError(f"bag id {values[0]} repeated", number)
            bags[node] = tuple(_vertex(v, n, number) for v in values[1:])
        else:
            values = _integers(tokens, number)
            if len(values) != 2:
                raise ParseError("tree edge must read '<i> <j>'", number)
            edges.append(tuple(_vertex(x, count, number, 'bag id') for x in values))

    if header is None:
        raise ParseError("missing 's td <bags> <max-bag-size> <n>' header")
    count, widest, n, number = header
    if len(bags) != count:
        missing = min(set(range(count)) - set(bags))
        raise ParseError(f"bag {missing + 1} is never listed", number)
    td = TreeDecomposition(tuple(bags[i] for i in range(count)), tuple(edges), n)
    if td.max_bag_size != widest:
        logger.warning(f"header declares max bag size {widest}, bags reach {td.max_bag_size}")
    if graph is not None:
        report = validate(graph, td)
        if not report['valid']:
            first = report['violations'][0]
            raise InputError(f"tree decomposition fails {first['condition']}: {first['message']}")
    return td


def serialize_td(td: TreeDecomposition) -> str:
    lines = [f"s td {td.num_nodes} {td.max_bag_size} {td.num_vertices}"]
    for node, bag in enumerate(td.bags):
        lines.append(' '.join(['b', str(node + 1)] + [str(v + 1) for v in bag]))
    lines.extend(f"{a + 1} {b + 1}" for a, b in td.tree_edges)
    return '\n'.join(lines) + '\n'


def serialize_stats(stats: Dict) -> str:
    """key=value lines in insertion order"""
    return ''.join(f"{key}={value}\n" for key, value in stats.items())
