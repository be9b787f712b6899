"""Shared fixtures data: 4x4 oracle arrays, symmetry transforms, cached samples."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

import numpy as np

from sudostats import get_board
from sudostats.bias import path_probability
from sudostats.generators import Batch, GeneratorKind, generate_batch
from sudostats.solver import enumerate_complete_grids, minimal_masks

VERDICTS: list[str] = []  # acceptance lines, echoed in the terminal summary
CACHE = Path(os.environ.get("SUDOSTATS_TEST_CACHE", Path(__file__).parent / "cache"))


def puzzle_keys(values: np.ndarray) -> np.ndarray:
    """Integer key per row of 4x4 value arrays (base 5)."""
    values = np.asarray(values, dtype=np.int64).reshape(-1, 16)
    return values @ (5 ** np.arange(16, dtype=np.int64))


class Oracle:
    """Every 4x4 grid and every minimal 4x4 puzzle, as arrays."""

    def __init__(self):
        board = get_board(2)
        self.board = board
        self.grids = np.array([g.values for g in enumerate_complete_grids(board)], dtype=np.int8)
        bits = 1 << np.arange(16)
        rows, owner = [], []
        for gi, masks in enumerate(minimal_masks(2)):
            keep = (np.asarray(masks)[:, None] & bits) != 0
            rows.append(np.where(keep, self.grids[gi], 0))
            owner.append(np.full(len(masks), gi))
        self.minimals = np.concatenate(rows).astype(np.int8)
        self.grid_of = np.concatenate(owner)
        self.clues = np.count_nonzero(self.minimals, axis=1)
        self.keys = puzzle_keys(self.minimals)
        order = np.argsort(self.keys)
        self._sorted_keys = self.keys[order]
        self._order = order

    @property
    def counts(self) -> dict[int, int]:
        ns, cs = np.unique(self.clues, return_counts=True)
        return {int(n): int(c) for n, c in zip(ns, cs)}

    def per_grid(self) -> dict[int, float]:
        return {n: c / len(self.grids) for n, c in self.counts.items()}

    def success_rate(self) -> float:
        """Exact controlled-bias outputs per grid attempt."""
        return sum(float(path_probability(n, 16)) * c for n, c in self.per_grid().items())

    def index_of(self, values: np.ndarray) -> np.ndarray:
        """Oracle row of each puzzle, -1 when it is not a minimal puzzle."""
        keys = puzzle_keys(values)
        pos = np.searchsorted(self._sorted_keys, keys).clip(0, len(self._sorted_keys) - 1)
        hit = self._sorted_keys[pos] == keys
        return np.where(hit, self._order[pos], -1)


@lru_cache(maxsize=1)
def oracle() -> Oracle:
    return Oracle()


def first_row_clues(values: np.ndarray, side: int) -> np.ndarray:
    return np.count_nonzero(np.asarray(values).reshape(-1, side, side)[:, 0, :], axis=1).astype(float)


def cached_batch(name: str, kind, count: int, seed: int, board, source=None) -> Batch:
    """Generate once and keep the arrays under the test cache directory."""
    path = CACHE / f"{name}.npz"
    if path.exists():
        data = np.load(path)
        if len(data["values"]) == count:
            return Batch(GeneratorKind(kind), board, seed, data["values"], data["grids"])
    batch = generate_batch(kind, count, seed, 1, board, source)
    CACHE.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, values=batch.values, grids=batch.grids_consumed)
    return batch


# -- symmetries -----------------------------------------------------------------


def random_symmetry(rng: np.random.Generator, k: int):
    """A random validity-preserving transform of k^2 x k^2 value arrays."""
    side = k * k
    relabel = np.concatenate([[0], rng.permutation(side) + 1])

    def line_perm():
        bands = rng.permutation(k)
        return np.concatenate([b * k + rng.permutation(k) for b in bands])

    rows, cols = line_perm(), line_perm()
    transpose = bool(rng.integers(2))

    def apply(values: np.ndarray) -> np.ndarray:
        g = np.asarray(values).reshape(side, side)[rows][:, cols]
        if transpose:
            g = g.T
        return relabel[g].reshape(-1).astype(np.int8)

    return apply
