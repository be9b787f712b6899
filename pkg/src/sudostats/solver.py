"""Exact solution counting, minimality, complete grids and the 4x4 oracle."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from . import _kernels
from .board import Board, Grid, Puzzle, get_board

__all__ = [
    "count_solutions",
    "enumerate_all_minimals",
    "enumerate_complete_grids",
    "is_minimal",
    "random_complete_grid",
    "solution",
    "rng_seed",
]


def rng_seed(rng: np.random.Generator) -> int:
    """Draw a kernel seed from ``rng`` (consumes one 63-bit integer)."""
    return int(rng.integers(0, 2**63 - 1))


def count_solutions(p: Puzzle, cap: int = 2) -> int:
    """Number of solutions of ``p``, capped at ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return int(_kernels.count_solutions(p.values, cap, p.board.k))


def solution(p: Puzzle) -> Grid | None:
    """The unique solution of ``p``, or None if it has zero or several."""
    if count_solutions(p, 2) != 1:
        return None
    vals = p.values.copy()
    _kernels._search(vals, 1, p.board.k, False)
    return Grid(p.board, vals)


def is_minimal(p: Puzzle) -> bool:
    """Unique solution, and every single-clue deletion has several."""
    return bool(_kernels.is_minimal(p.values, p.board.k))


def random_complete_grid(rng: np.random.Generator, board: Board) -> Grid:
    """Backtracking fill of the empty board with values tried in random order."""
    return Grid(board, _kernels.random_grid(rng_seed(rng), board.k))


def _require_small(board: Board) -> None:
    if board.k != 2:
        raise ValueError(
            "exhaustive enumeration is only feasible for the 4x4 board "
            "(the 9x9 board has about 6.67e21 complete grids)"
        )


@lru_cache(maxsize=None)
def _grid_array(k: int) -> np.ndarray:
    # brute force over row permutations, independent of the search kernel
    board = get_board(k)
    _require_small(board)
    side = board.side
    perms = list(permutations(range(1, side + 1)))
    found = []

    def boxes_ok(rows):
        for r0 in range(0, len(rows) - len(rows) % board.k, board.k):
            for c0 in range(0, side, board.k):
                vals = {rows[r][c] for r in range(r0, r0 + board.k) for c in range(c0, c0 + board.k)}
                if len(vals) != side:
                    return False
        return True

    def extend(rows):
        if len(rows) == side:
            found.append([v for row in rows for v in row])
            return
        for p in perms:
            if any(p[c] == row[c] for row in rows for c in range(side)):
                continue
            nxt = rows + [p]
            if len(nxt) % board.k == 0 and not boxes_ok(nxt):
                continue
            extend(nxt)

    extend([])
    out = np.array(found, dtype=np.int8)
    out.setflags(write=False)
    return out


def enumerate_complete_grids(board: Board) -> list[Grid]:
    """All complete grids of the 4x4 board (288 of them), sorted by line text."""
    _require_small(board)
    return [Grid(board, row) for row in _grid_array(board.k)]


@lru_cache(maxsize=None)
def minimal_masks(k: int) -> tuple[np.ndarray, ...]:
    """Per grid (in :func:`enumerate_complete_grids` order), the clue-cell
    bitmasks of its minimal sub-puzzles.

    A sub-puzzle of grid ``g`` with clue cells ``S`` has another solution
    iff ``S`` is contained in the agreement set of ``g`` with some other
    grid, so uniqueness over the whole subset lattice follows from a
    superset-closure pass per cell bit.
    """
    board = get_board(k)
    _require_small(board)
    grids = _grid_array(k)
    n = board.cells
    weights = (1 << np.arange(n, dtype=np.int64))
    idx = np.arange(1 << n, dtype=np.int64)
    lacks = [(idx & (1 << b)) == 0 for b in range(n)]
    out = []
    for g in range(len(grids)):
        agree = (grids == grids[g]).astype(np.int64) @ weights
        agree = np.delete(agree, g)
        multi = np.zeros(1 << n, dtype=bool)
        multi[agree] = True
        for b in range(n):
            sel = idx[lacks[b]]
            multi[sel] |= multi[sel | (1 << b)]
        minimal = ~multi
        for b in range(n):
            has = idx[~lacks[b]]
            minimal[has] &= multi[has ^ (1 << b)]
        minimal[0] = False
        out.append(np.flatnonzero(minimal))
    return tuple(out)


def enumerate_all_minimals(board: Board) -> set[Puzzle]:
    """Every minimal 4x4 puzzle, each exactly once."""
    _require_small(board)
    grids = _grid_array(board.k)
    bits = 1 << np.arange(board.cells)
    out = set()
    for g, masks in enumerate(minimal_masks(board.k)):
        for m in masks:
            vals = np.where(m & bits, grids[g], 0)
            out.add(Puzzle(board, vals))
    return out
