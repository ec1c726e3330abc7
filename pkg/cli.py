"""
widthforge command line
Thin adapters from sub-commands to the library; exit codes:
0 pass, 1 invariant failure, 2 input error, 3 size-cap refusal
"""

import argparse
import logging
import sys
from typing import List, Optional

from core.branch_solver import line_graph_bd, solve_branchwidth, width_of
from core.compiler import compile_tree_decomposition
from core.constructions import odd_power_transfer, perfect_triple_extract
from core.cut_functions import KINDS
from core.errors import InputError, InvariantViolation, SizeCapError
from core.generators import FAMILIES, FamilySpec, generate
from core.graph import graph_power, line_graph
from core.tree_decomp import line_graph_td
from utils.formats import (parse_bd, parse_graph, parse_td, serialize_bd, serialize_graph,
                           serialize_stats, serialize_td)
from utils.helpers import get_log_level
from utils.verify import SUITES, report_passed, run_verify

logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_CAP = 3


def _read(path: str) -> str:
    if path == '-':
        return sys.stdin.read()
    with open(path, 'r', encoding='utf-8') as handle:
        return handle.read()


def _write(path: Optional[str], text: str):
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)


def cmd_width(args) -> int:
    graph = parse_graph(_read(args.graph))
    bd = parse_bd(_read(args.bd))
    target = graph
    if args.line:
        target = line_graph(graph)
        bd = line_graph_bd(graph, bd)
    report = width_of(target, bd, args.kind)
    print(f"{report.kind} width {report.value}")
    for (a, b), value in report.edge_values:
        print(f"edge {a + 1} {b + 1} {value}")
    return EXIT_OK


def cmd_solve(args) -> int:
    graph = parse_graph(_read(args.graph))
    target = line_graph(graph) if args.line else graph
    report = solve_branchwidth(target, args.kind, prune=False if args.no_prune else None)
    _write(args.output, serialize_bd(report.witness))
    logger.info(f"{report.kind}-branch-width {report.value}")
    if args.output not in (None, '-'):
        print(f"{report.kind} width {report.value}")
    return EXIT_OK


def cmd_compile_td(args) -> int:
    graph = parse_graph(_read(args.graph))
    bd = parse_bd(_read(args.bd))
    td, stats = compile_tree_decomposition(graph, bd, args.n, args.m, args.k,
                                           check=args.check, incremental=not args.full_refresh)
    _write(args.output, serialize_td(td))
    if args.output not in (None, '-'):
        _write(f"{args.output}.stats", serialize_stats(stats))
    else:
        sys.stderr.write(serialize_stats(stats))
    return EXIT_OK


def cmd_power(args) -> int:
    graph = parse_graph(_read(args.graph))
    if args.bd:
        base, lifted = odd_power_transfer(graph, parse_bd(_read(args.bd)), args.r)
        print(f"sim width {base.value} on G, {lifted.value} on G^{args.r}")
    if args.output or not args.bd:
        _write(args.output, serialize_graph(graph_power(graph, args.r)))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = FamilySpec(args.family, tuple(args.params), args.seed)
    _write(args.output, serialize_graph(generate(spec)))
    return EXIT_OK


def cmd_line(args) -> int:
    graph = parse_graph(_read(args.graph))
    _write(args.output, serialize_graph(line_graph(graph)))
    if args.bd:
        _write(args.bd_out, serialize_bd(line_graph_bd(graph, parse_bd(_read(args.bd)))))
    if args.td:
        td = parse_td(_read(args.td), graph)
        _write(args.td_out, serialize_td(line_graph_td(graph, td)))
    return EXIT_OK


def cmd_verify(args) -> int:
    options = {
        'max_n': args.max_n,
        'max_m': args.max_m,
        'count': args.count,
        'seed': args.seed,
    }
    if args.powers:
        options['powers'] = args.powers
    if args.rook_sizes:
        options['rook_sizes'] = args.rook_sizes
    frame = run_verify(args.suite, args.output, **options)
    if not args.output:
        sys.stdout.write(frame.to_csv(index=False))
    return EXIT_OK if report_passed(frame) else EXIT_INVARIANT


def cmd_triple(args) -> int:
    graph = parse_graph(_read(args.graph))
    bd = parse_bd(_read(args.bd))
    a, b = args.edge
    matching = perfect_triple_extract(graph, bd, (a - 1, b - 1), args.n)
    print(f"induced matching of size {matching.size} in L(G)")
    for x, y in matching.oriented():
        print(f"m {x + 1} {y + 1}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='widthforge', description='Exact graph width parameters and decompositions')
    commands = parser.add_subparsers(dest='command', required=True)

    width = commands.add_parser('width', help='evaluate a branch decomposition')
    width.add_argument('graph')
    width.add_argument('bd')
    width.add_argument('--kind', choices=KINDS, required=True)
    width.add_argument('--line', action='store_true', help='read bd over edges and evaluate on L(G)')
    width.set_defaults(handler=cmd_width)

    solve = commands.add_parser('solve', help='optimal branch decomposition')
    solve.add_argument('graph')
    solve.add_argument('--kind', choices=KINDS, required=True)
    solve.add_argument('--line', action='store_true', help='solve on L(G)')
    solve.add_argument('--no-prune', action='store_true')
    solve.add_argument('-o', '--output')
    solve.set_defaults(handler=cmd_solve)

    compile_td = commands.add_parser('compile-td', help='tree decomposition from a branch decomposition')
    compile_td.add_argument('graph')
    compile_td.add_argument('bd')
    compile_td.add_argument('--n', type=int)
    compile_td.add_argument('--m', type=int)
    compile_td.add_argument('--k', type=int)
    compile_td.add_argument('--check', action='store_true')
    compile_td.add_argument('--full-refresh', action='store_true')
    compile_td.add_argument('-o', '--output')
    compile_td.set_defaults(handler=cmd_compile_td)

    power = commands.add_parser('power', help='graph power, optionally transferring a decomposition')
    power.add_argument('graph')
    power.add_argument('-r', type=int, required=True)
    power.add_argument('--bd')
    power.add_argument('-o', '--output')
    power.set_defaults(handler=cmd_power)

    gen = commands.add_parser('gen', help='generate a family member')
    gen.add_argument('family', choices=sorted(FAMILIES))
    gen.add_argument('params', type=int, nargs='*')
    gen.add_argument('--seed', type=int)
    gen.add_argument('-o', '--output')
    gen.set_defaults(handler=cmd_gen)

    line = commands.add_parser('line', help='line graph with transported decompositions')
    line.add_argument('graph')
    line.add_argument('-o', '--output')
    line.add_argument('--bd')
    line.add_argument('--bd-out')
    line.add_argument('--td')
    line.add_argument('--td-out')
    line.set_defaults(handler=cmd_line)

    verify = commands.add_parser('verify', help='run a verification suite')
    verify.add_argument('suite', choices=SUITES)
    verify.add_argument('--max-n', type=int)
    verify.add_argument('--max-m', type=int)
    verify.add_argument('--count', type=int)
    verify.add_argument('--seed', type=int)
    verify.add_argument('--powers', type=int, nargs='+')
    verify.add_argument('--rook-sizes', type=int, nargs='+')
    verify.add_argument('-o', '--output')
    verify.set_defaults(handler=cmd_verify)

    triple = commands.add_parser('triple', help='perfect-triple matching at a tree edge')
    triple.add_argument('graph')
    triple.add_argument('bd')
    triple.add_argument('--edge', type=int, nargs=2, required=True, metavar=('I', 'J'))
    triple.add_argument('--n', type=int, required=True)
    triple.set_defaults(handler=cmd_triple)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SizeCapError as e:
        logger.error(f"Refused: {str(e)}")
        return EXIT_CAP
    except InvariantViolation as e:
        logger.error(f"Invariant failure: {str(e)}")
        return EXIT_INVARIANT
    except (InputError, OSError) as e:
        logger.error(f"Error processing {args.command}: {str(e)}")
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
