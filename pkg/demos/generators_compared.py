"""
Three generators, three biases
==============================

Bottom-up adds clues to an empty board, top-down deletes clues from a
complete grid, and the controlled-bias generator deletes clues but
starts over from a fresh grid whenever the solution stops being unique.
All three output minimal puzzles; they differ in which ones they favour.
"""

import time

import numpy as np

from sudostats import get_board, is_minimal
from sudostats.generators import GridCatalog, generate_batch
from sudostats.solver import enumerate_complete_grids

board = get_board(3)

# a few hundred 9x9 puzzles of each classical kind take seconds
for kind in ("bottom-up", "top-down"):
    t = time.time()
    batch = generate_batch(kind, 300, seed=1, board=board)
    print(f"{kind:10s} mean clues {batch.clue_counts.mean():.2f}  ({time.time() - t:.1f}s)")

# one 9x9 controlled-bias puzzle costs ~250,000 grid attempts (about 20s)
t = time.time()
one = generate_batch("ctr-bias", 1, seed=1, board=board)
print("ctr-bias   one puzzle,", one.total_grids, "grids,", f"{time.time() - t:.1f}s,",
      one.clue_counts[0], "clues, minimal:", is_minimal(one.puzzle(0)))

# on 4x4 the controlled-bias generator is cheap; feed it every complete grid
small = get_board(2)
catalog = GridCatalog(small, enumerate_complete_grids(small))
for kind in ("bottom-up", "top-down", "ctr-bias"):
    batch = generate_batch(kind, 5000, seed=2, board=small,
                           grid_source=None if kind == "bottom-up" else catalog)
    on = batch.on
    share = {n: round(100 * c / len(batch), 1) for n, c in on.items()}
    print(f"4x4 {kind:10s} clue-count % {share}  grids/output {batch.total_grids / len(batch):.2f}")

# same seed, any number of workers: same puzzles
a = generate_batch("top-down", 64, seed=7, worker_count=1, board=board)
b = generate_batch("top-down", 64, seed=7, worker_count=2, board=board)
print("worker-independent:", np.array_equal(a.values, b.values))
