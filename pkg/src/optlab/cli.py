"""Command-line front door: build, emit, solve, count and render projects.

Exit codes: 0 for optimal/feasible results, 2 for infeasible, 3 when a
time or node limit cut the search short, 1 for usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from .branch_and_bound import (EnumerationLimit, SolStatus, Solution,
                               SolveConfig, enumerate_optimal, solve)
from .lp_io import parse_lp, write_lp
from .model import Model, ModelError
from .simplex import IterationLimitExceeded, LpStatus, solve_relaxation
from .puzzles.queens import (build_queens, build_queens_blocking,
                             decode_queens)
from .puzzles.sudoku import (Uniqueness, check_unique, decode_sudoku,
                             parse_sudoku)
from .puzzles.tsp import build_tsp, decode_tour, parse_tsp
from .puzzles.knight import build_knight_tour, decode_knight_tour
from .puzzles.knapsack import (build_knapsack, decode_knapsack,
                               parse_knapsack_csv)
from .puzzles.tiling import (TilingInstance, build_tiling, decode_tiling,
                             parse_sizes)
from .puzzles.paths import build_shortest_path, decode_path, parse_arc_list
from . import tsp_art

_log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_LIMIT = 3

_STATUS_EXIT = {
    SolStatus.OPTIMAL: EXIT_OK,
    SolStatus.INFEASIBLE: EXIT_INFEASIBLE,
    SolStatus.UNBOUNDED: EXIT_INFEASIBLE,
    SolStatus.LIMIT_REACHED: EXIT_LIMIT,
}


def _setup_logging() -> None:
    level = {"quiet": logging.WARNING, "info": logging.INFO,
             "debug": logging.DEBUG}.get(os.environ.get("OPTLAB_LOG", "quiet"))
    if level is None:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(name)s: %(message)s")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, metavar="SEC")
    p.add_argument("--node-limit", type=int, metavar="N")
    p.add_argument("--emit-lp", metavar="FILE",
                   help="write the model in LP format and exit")
    p.add_argument("--relax-only", action="store_true",
                   help="solve only the LP relaxation")
    p.add_argument("--json", action="store_true", dest="as_json",
                   help="machine-readable result on stdout")


def _config(args) -> SolveConfig:
    return SolveConfig(time_limit=args.time_limit, node_limit=args.node_limit)


def _emit_json(model: Model, result: Solution) -> None:
    values: Dict[str, float] = {}
    if result.values:
        values = {model.variables[vid].name: v
                  for vid, v in sorted(result.values.items())}
    print(json.dumps({"status": result.status.value,
                      "objective": result.objective,
                      "values": values,
                      "stats": result.stats}, sort_keys=True))


def _finish(model: Model, args, result: Solution,
            render: Optional[str] = None) -> int:
    if args.as_json:
        _emit_json(model, result)
    else:
        if result.objective is not None:
            print(f"optimum {result.objective:g}")
        else:
            print(f"status {result.status.value}")
        if render and result.values:
            print(render)
    return _STATUS_EXIT[result.status]


def _maybe_emit_lp(model: Model, args) -> bool:
    if args.emit_lp:
        with open(args.emit_lp, "w") as fh:
            fh.write(write_lp(model))
        return True
    return False


def _relax(model: Model, args) -> int:
    res = solve_relaxation(model)
    if args.as_json:
        values = {}
        if res.values:
            values = {model.variables[vid].name: v
                      for vid, v in sorted(res.values.items())}
        print(json.dumps({"status": res.status.value,
                          "objective": res.objective,
                          "values": values,
                          "stats": {"lp_iterations": res.iterations}},
                         sort_keys=True))
    elif res.status is LpStatus.OPTIMAL:
        print(f"relaxation optimum {res.objective:g}")
    else:
        print(f"status {res.status.value}")
    return EXIT_OK if res.status is LpStatus.OPTIMAL else EXIT_INFEASIBLE


def _solve_model(model: Model, args, decode=None, lazy=None) -> int:
    if _maybe_emit_lp(model, args):
        return EXIT_OK
    if args.relax_only:
        return _relax(model, args)
    config = _config(args)
    config.lazy = lazy
    result = solve(model, config)
    render = decode(result) if decode and result.values else None
    return _finish(model, args, result, render)


# --------------------------------------------------------------------------
# subcommands


def _cmd_solve(args) -> int:
    with open(args.file) as fh:
        model = parse_lp(fh.read())
    return _solve_model(model, args)


def _cmd_queens(args) -> int:
    model = build_queens(args.n,
                         drop_trivial_diagonals=args.drop_trivial_diagonals)
    if _maybe_emit_lp(model, args):
        return EXIT_OK
    if args.relax_only:
        return _relax(model, args)
    if args.count_all:
        try:
            solutions = enumerate_optimal(model, _config(args))
        except EnumerationLimit as exc:
            print(f"limit reached after {len(exc.solutions)} solutions",
                  file=sys.stderr)
            return EXIT_LIMIT
        if not solutions:
            print("status infeasible")
            return EXIT_INFEASIBLE
        print(f"optimum {solutions[0].objective:g}")
        print(f"solutions {len(solutions)}")
        return EXIT_OK
    return _solve_model(
        model, args,
        decode=lambda res: decode_queens(model, res).render())


def _cmd_queens_block(args) -> int:
    model = build_queens_blocking(args.n)
    return _solve_model(
        model, args,
        decode=lambda res: decode_queens(model, res).render())


def _cmd_sudoku(args) -> int:
    with open(args.file) as fh:
        grid = parse_sudoku(fh.read())
    model = None

    if args.check_unique:
        result = check_unique(grid, _config(args))
        print(f"uniqueness {result.verdict.value}")
        if result.solution is not None:
            print(result.solution.render())
        return (EXIT_INFEASIBLE if result.verdict is Uniqueness.INFEASIBLE
                else EXIT_OK)

    from .puzzles.sudoku import build_sudoku
    model = build_sudoku(grid)
    return _solve_model(
        model, args,
        decode=lambda res: decode_sudoku(res).render())


def _cmd_tsp(args) -> int:
    with open(args.file) as fh:
        graph = parse_tsp(fh.read())
    model, cuts = build_tsp(graph)
    return _solve_model(
        model, args, lazy=cuts,
        decode=lambda res: "tour " + " ".join(
            str(k) for k in decode_tour(model, res)))


def _render_knight(n: int, cells) -> str:
    board = [[0] * n for _ in range(n)]
    for move, (r, c) in enumerate(cells, start=1):
        board[r][c] = move
    width = len(str(n * n))
    return "\n".join(" ".join(f"{board[r][c]:{width}d}" for c in range(n))
                     for r in range(n))


def _cmd_knight(args) -> int:
    closed = not args.open
    model, cuts = build_knight_tour(args.n, closed)
    return _solve_model(
        model, args, lazy=cuts,
        decode=lambda res: _render_knight(
            args.n, decode_knight_tour(model, res, args.n, closed)))


def _cmd_knapsack(args) -> int:
    with open(args.file) as fh:
        instance = parse_knapsack_csv(fh.read(), args.capacity)
    model = build_knapsack(instance)
    return _solve_model(
        model, args,
        decode=lambda res: "selected " + " ".join(
            decode_knapsack(instance, res)))


def _cmd_tiling(args) -> int:
    rows = args.rows if args.rows is not None else args.rows_pos
    cols = args.cols if args.cols is not None else args.cols_pos
    if rows is None or cols is None:
        print("tiling needs room dimensions (positional or --rows/--cols)",
              file=sys.stderr)
        return EXIT_USAGE
    instance = TilingInstance(rows, cols, parse_sizes(args.sizes))
    model = build_tiling(instance)

    def render(res) -> str:
        tiles = decode_tiling(instance, res)
        lines = [f"tiles {len(tiles)}"]
        lines += [f"{a}x{a} at ({r},{c})" for a, r, c in tiles]
        return "\n".join(lines)

    return _solve_model(model, args, decode=render)


def _cmd_path(args) -> int:
    with open(args.file) as fh:
        instance = parse_arc_list(fh.read())
    model = build_shortest_path(instance)

    def render(res) -> str:
        arcs = decode_path(instance, res)
        nodes = [str(arcs[0][0])] + [str(v) for _, v, _ in arcs]
        return "path " + " -> ".join(nodes)

    return _solve_model(model, args, decode=render)


def _cmd_art(args) -> int:
    if args.file.endswith(".pgm"):
        with open(args.file, "rb") as fh:
            image = tsp_art.parse_pgm(fh.read())
        points = tsp_art.sample_points(image, args.points, args.seed).points
    else:
        with open(args.file) as fh:
            points = tsp_art.parse_points(fh.read())
    if len(points) <= tsp_art.DEFAULT_EXACT_CAP:
        tour = tsp_art.exact_tour(points)
    else:
        tour = tsp_art.heuristic_tour(points)
    if args.as_json:
        print(json.dumps({"status": "optimal", "objective": tour.length,
                          "values": {str(k): o
                                     for k, o in enumerate(tour.order)},
                          "stats": {"points": len(points)}}, sort_keys=True))
    else:
        print(f"points {len(points)}")
        print(f"length {tour.length:.3f}")
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(tsp_art.render_svg(points, tour))
    return EXIT_OK


# --------------------------------------------------------------------------
# argument grammar


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optlab",
        description="Exact ILP solving for puzzle projects, LP file I/O "
                    "and TSP art.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a model in LP format")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("queens", help="n-queens: maximize placed queens")
    p.add_argument("-n", type=int, default=8)
    p.add_argument("--count-all", action="store_true",
                   help="enumerate all optimal placements")
    p.add_argument("--drop-trivial-diagonals", action="store_true",
                   help="omit length-1 corner diagonal constraints")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_queens)

    p = sub.add_parser("queens-block",
                       help="fewest queens that block every square")
    p.add_argument("-n", type=int, default=8)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_queens_block)

    p = sub.add_parser("sudoku", help="solve a 9x9 sudoku from a text file")
    p.add_argument("file")
    p.add_argument("--check-unique", action="store_true",
                   help="report whether the puzzle has exactly one solution")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_sudoku)

    p = sub.add_parser("tsp", help="exact travelling-salesman tour")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_tsp)

    p = sub.add_parser("knight", help="knight tour on an n x n board")
    p.add_argument("-n", type=int, default=8)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--closed", action="store_true", default=True)
    group.add_argument("--open", action="store_true")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_knight)

    p = sub.add_parser("knapsack", help="0/1 knapsack from CSV")
    p.add_argument("file")
    p.add_argument("--capacity", type=float, required=True)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_knapsack)

    p = sub.add_parser("tiling", help="cover a room with square tiles")
    p.add_argument("rows_pos", nargs="?", type=int, default=None,
                   metavar="ROWS")
    p.add_argument("cols_pos", nargs="?", type=int, default=None,
                   metavar="COLS")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--sizes", default="1..12",
                   help="tile sizes, e.g. 1..12 or 1,2,3")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_tiling)

    p = sub.add_parser("path", help="shortest path from an arc list")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_path)

    p = sub.add_parser("art", help="TSP line art from a PGM or point list")
    p.add_argument("file")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", metavar="FILE")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=_cmd_art)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (OSError, ModelError, IterationLimitExceeded,
            tsp_art.PgmFormatError, tsp_art.AllWhiteImage,
            tsp_art.TooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
