"""Minimal Sudoku puzzle generation, NRCZT rating and bias-corrected statistics."""

__version__ = "0.1.0"

from .board import Board, Candidate, Grid, Puzzle, format_puzzle, get_board, linked, parse_puzzle, peers
from .solver import (
    count_solutions,
    enumerate_all_minimals,
    enumerate_complete_grids,
    is_minimal,
    random_complete_grid,
    solution,
)
from .generators import (
    GeneratorKind,
    GridCatalog,
    bottom_up_one,
    controlled_bias_one,
    generate_batch,
    top_down_one,
)
from .rating import apply_L0, find_zt_whip, init_state, nrczt_rating, solve_with_Ln, validate_whip
from .bias import BiasModel, SampleStats, correction_factors, transition_ratio, unbiased_mean, unbiased_sd
from .census import estimate_counts_per_grid, estimate_success_rate, estimate_tries, totals

__all__ = [
    "apply_L0",
    "BiasModel",
    "Board",
    "bottom_up_one",
    "Candidate",
    "controlled_bias_one",
    "correction_factors",
    "count_solutions",
    "enumerate_all_minimals",
    "enumerate_complete_grids",
    "estimate_counts_per_grid",
    "estimate_success_rate",
    "estimate_tries",
    "find_zt_whip",
    "format_puzzle",
    "generate_batch",
    "GeneratorKind",
    "get_board",
    "Grid",
    "GridCatalog",
    "init_state",
    "is_minimal",
    "linked",
    "nrczt_rating",
    "parse_puzzle",
    "peers",
    "Puzzle",
    "random_complete_grid",
    "SampleStats",
    "solution",
    "solve_with_Ln",
    "top_down_one",
    "totals",
    "transition_ratio",
    "unbiased_mean",
    "unbiased_sd",
    "validate_whip",
]
