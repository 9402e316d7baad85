"""ILP models of the puzzle projects, with decoders and validators."""

from .queens import (QueensBoard, build_queens, build_queens_blocking,
                     decode_queens, is_blocking, is_non_attacking)
from .sudoku import (SudokuGrid, Uniqueness, UniquenessResult, build_sudoku,
                     check_unique, decode_sudoku, is_valid_complete,
                     parse_sudoku, solve_sudoku)
from .tsp import (WeightedGraph, build_tsp, decode_tour, is_hamiltonian_cycle,
                  parse_tsp, tour_length)
from .knight import (build_knight_tour, decode_knight_tour, is_knight_tour,
                     knight_edges)
from .knapsack import (KnapsackInstance, build_knapsack, decode_knapsack,
                       parse_knapsack_csv, selection_weight)
from .tiling import (TilingInstance, build_tiling, decode_tiling,
                     is_exact_cover, parse_sizes)
from .paths import (PathInstance, build_shortest_path, decode_path, is_path,
                    parse_arc_list)

__all__ = [
    "QueensBoard", "build_queens", "build_queens_blocking", "decode_queens",
    "is_blocking", "is_non_attacking",
    "SudokuGrid", "Uniqueness", "UniquenessResult", "build_sudoku",
    "check_unique", "decode_sudoku", "is_valid_complete", "parse_sudoku",
    "solve_sudoku",
    "WeightedGraph", "build_tsp", "decode_tour", "is_hamiltonian_cycle",
    "parse_tsp", "tour_length",
    "build_knight_tour", "decode_knight_tour", "is_knight_tour",
    "knight_edges",
    "KnapsackInstance", "build_knapsack", "decode_knapsack",
    "parse_knapsack_csv", "selection_weight",
    "TilingInstance", "build_tiling", "decode_tiling", "is_exact_cover",
    "parse_sizes",
    "PathInstance", "build_shortest_path", "decode_path", "is_path",
    "parse_arc_list",
]
