"""
Correcting the controlled bias on 4x4
=====================================

The controlled-bias generator outputs an n-clue minimal puzzle with
probability proportional to 1/C(16, n).  Weighting each clue count by
cf(n) undoes that, so sample statistics estimate the population of all
minimal puzzles.  On 4x4 that population is known exactly.
"""

import numpy as np

from sudostats import get_board
from sudostats.bias import BiasModel, SampleStats, correction_factors, raw_mean, unbiased_mean
from sudostats.generators import GridCatalog, generate_batch
from sudostats.solver import enumerate_all_minimals, enumerate_complete_grids

board = get_board(2)
population = enumerate_all_minimals(board)
clues = np.array([m.n_clues for m in population])
row1 = np.array([np.count_nonzero(m.values[:4]) for m in population])
print("population:", len(population), "puzzles, mean clues", clues.mean().round(4),
      "mean first-row clues", row1.mean().round(4))

catalog = GridCatalog(board, enumerate_complete_grids(board))
batch = generate_batch("ctr-bias", 100_000, seed=5, board=board, grid_source=catalog)
n = batch.clue_counts
stats = SampleStats.from_arrays(n, {"clues": n, "row1": np.count_nonzero(batch.values[:, :4], axis=1)})

model = BiasModel(cells=16, anchor=5)
print("cf:", {k: float(v) for k, v in correction_factors(4, 6, 5, 16).items()})
for x in ("clues", "row1"):
    print(f"{x:6s} raw {raw_mean(stats, x):.4f}  corrected {unbiased_mean(stats, x, model):.4f}")
