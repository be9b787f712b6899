"""
Counting minimal puzzles from a sample
======================================

Each grid attempt of the controlled-bias generator outputs a given
n-clue minimal puzzle with probability 1/C(cells, n).  Inverting that
turns output tallies into the mean number of minimal puzzles per grid.
"""

import math

from sudostats import get_board
from sudostats.census import (
    GRIDS_9X9,
    CensusEstimate,
    estimate_counts_per_grid,
    estimate_success_rate,
    estimate_tries,
    totals,
)
from sudostats.generators import GridCatalog, generate_batch
from sudostats.solver import enumerate_all_minimals, enumerate_complete_grids

board = get_board(2)
grids = enumerate_complete_grids(board)
batch = generate_batch("ctr-bias", 50_000, seed=6, board=board, grid_source=GridCatalog(board, grids))

s = estimate_success_rate(len(batch), batch.total_grids)
est = estimate_counts_per_grid(batch.on, len(batch), s, board.cells)
exact = {}
for m in enumerate_all_minimals(board):
    exact[m.n_clues] = exact.get(m.n_clues, 0) + 1 / len(grids)

print(f"success rate {s:.4f}")
for n, c in est.count.items():
    print(f"n={n}: {c:8.3f} +/- {100 * est.rel_err[n]:.1f}%   exact {exact[n]:8.3f}   "
          f"tries {estimate_tries(est.count, 16)[n]:8.1f}")
t = totals(est, len(grids))
print(f"total minimal 4x4 puzzles ~ {t.total:.0f} +/- {100 * t.rel_err:.1f}%  (exact {round(sum(exact.values()) * 288)})")

# the same arithmetic on published 9x9 per-grid means (22-clue entry at 1.6208e11,
# the value its own tries figure implies)
published = {20: 6.152e6, 21: 1.4654e9, 22: 1.6208e11, 23: 6.8827e12, 24: 1.0637e14,
             25: 6.2495e14, 26: 1.4855e15, 27: 1.5228e15, 28: 7.2063e14, 29: 1.6751e14,
             30: 1.9277e13, 31: 1.1240e12, 32: 4.7465e10}
big = totals(CensusEstimate.from_counts(published, 81), GRIDS_9X9)
print(f"9x9: {big.per_grid:.4e} per grid, {big.total:.4e} in all; C(81,26) = {math.comb(81, 26):.4e}")
