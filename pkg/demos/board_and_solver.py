"""
Boards, puzzles and solution counting
=====================================

A puzzle is a line of cells, '.' for empty.  The same code handles the
ordinary 9x9 board and the 4x4 board, which is small enough to enumerate.
"""

import numpy as np

from sudostats import Puzzle, count_solutions, get_board, is_minimal, parse_puzzle, random_complete_grid
from sudostats.solver import enumerate_all_minimals, enumerate_complete_grids

board = get_board(3)
rng = np.random.default_rng(1)

# a random complete grid, and the same grid with a third of its cells erased
grid = random_complete_grid(rng, board)
holes = grid.values * (rng.random(board.cells) > 0.33)
p = Puzzle(board, holes)
print(grid)
print(p, p.n_clues, "clues")

# count_solutions stops at the cap; 2 is enough to decide uniqueness
print("solutions (cap 2):", count_solutions(p, 2))
print("empty board, cap 2:", count_solutions(Puzzle.empty(board), 2))
print("is the full grid minimal?", is_minimal(grid))

# text round trip
assert parse_puzzle(str(p), board) == p

# the 4x4 board can be enumerated exhaustively
small = get_board(2)
grids = enumerate_complete_grids(small)
print(len(grids), "complete 4x4 grids;", count_solutions(Puzzle.empty(small), 10**6), "by counting")
minimals = enumerate_all_minimals(small)
sizes = np.bincount([m.n_clues for m in minimals])
print(len(minimals), "minimal 4x4 puzzles; by clue count:",
      {n: int(c) for n, c in enumerate(sizes) if c})
