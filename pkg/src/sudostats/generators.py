"""Minimal-puzzle generators: bottom-up, top-down and controlled-bias.

Each generator produces one minimal puzzle per call.  Batches derive an
independent random stream per record from ``(seed, record index)`` with the
counter-based Philox generator, so a batch is reproducible and does not
depend on how records are split among worker processes.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, TextIO

import numpy as np

from . import _kernels
from .board import Board, Grid, Puzzle, format_values, parse_puzzle, read_puzzle_lines
from .solver import random_complete_grid, rng_seed

__all__ = [
    "Batch",
    "GenerationRecord",
    "GeneratorKind",
    "GridCatalog",
    "RandomGridSource",
    "SampleFormatError",
    "bottom_up_one",
    "controlled_bias_one",
    "generate_batch",
    "iter_batch",
    "read_sample",
    "record_rng",
    "top_down_one",
    "write_sample",
]


class GeneratorKind(str, enum.Enum):
    BOTTOM_UP = "bottom-up"
    TOP_DOWN = "top-down"
    CONTROLLED_BIAS = "ctr-bias"

    def __str__(self):
        return self.value


class SampleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationRecord:
    puzzle: Puzzle
    kind: GeneratorKind
    grids_consumed: int = 1
    tag: str = ""

    @property
    def n_clues(self) -> int:
        return self.puzzle.n_clues


def record_rng(seed: int, index: int) -> np.random.Generator:
    """Random stream of record ``index`` in a batch seeded with ``seed``."""
    counter = np.array([0, 0, index, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


# -- grid sources -------------------------------------------------------------


class RandomGridSource:
    """Fresh grid from the randomized backtracking fill on every call."""

    def __init__(self, board: Board):
        self.board = board

    def __call__(self, rng: np.random.Generator) -> Grid:
        return random_complete_grid(rng, self.board)


class GridCatalog:
    """Uniform choice from a fixed list of complete grids."""

    def __init__(self, board: Board, grids: Sequence[Grid] | np.ndarray):
        self.board = board
        arr = np.array([g.values for g in grids] if not isinstance(grids, np.ndarray) else grids,
                       dtype=np.int8)
        if arr.ndim != 2 or arr.shape[1] != board.cells or len(arr) == 0:
            raise ValueError("catalog needs at least one complete grid")
        if (arr == 0).any():
            raise ValueError("catalog entries must be complete grids")
        self.grids = np.ascontiguousarray(arr)

    def __len__(self):
        return len(self.grids)

    def __call__(self, rng: np.random.Generator) -> Grid:
        return Grid(self.board, self.grids[rng.integers(len(self.grids))])

    @classmethod
    def from_file(cls, path: str | os.PathLike, board: Board) -> "GridCatalog":
        """One grid per line; '#' lines and any text after a TAB are ignored."""
        with open(path) as fh:
            grids = []
            for line in read_puzzle_lines(fh):
                g = parse_puzzle(line, board)
                if not isinstance(g, Grid):
                    raise ValueError(f"not a complete grid: {line}")
                grids.append(g)
        return cls(board, grids)


GridSource = Callable[[np.random.Generator], Grid]


# -- single-puzzle generators -------------------------------------------------


def bottom_up_one(rng: np.random.Generator, board: Board) -> GenerationRecord:
    """Add random clues to the empty board until the solution is unique,
    then drop redundant clues."""
    vals, _ = _kernels.bottom_up(rng_seed(rng), board.k)
    return GenerationRecord(Puzzle(board, vals), GeneratorKind.BOTTOM_UP)


def top_down_one(rng: np.random.Generator, grid: Grid) -> GenerationRecord:
    """Delete random clues of ``grid`` while the solution stays unique."""
    vals = _kernels.top_down(grid.values, rng_seed(rng), grid.board.k)
    return GenerationRecord(Puzzle(grid.board, vals), GeneratorKind.TOP_DOWN)


_EMPTY = {k: np.zeros((0, k**4), dtype=np.int8) for k in (2, 3)}


def controlled_bias_one(
    rng: np.random.Generator,
    grid_source: GridSource | None = None,
    board: Board | None = None,
    max_grids: int | None = None,
) -> GenerationRecord:
    """Delete random clues; restart from a new grid as soon as the solution
    stops being unique.  Stops at the first minimal puzzle reached.

    ``grids_consumed`` counts every grid drawn, including the last one.
    Random and catalog sources run entirely in compiled code; any other
    callable is drawn from once per attempt.  Returns None if ``max_grids``
    attempts all fail.
    """
    if board is None:
        if grid_source is None:
            raise ValueError("board is required with the default grid source")
        board = grid_source.board
    limit = max_grids or 0
    if grid_source is None or isinstance(grid_source, (RandomGridSource, GridCatalog)):
        catalog = grid_source.grids if isinstance(grid_source, GridCatalog) else _EMPTY[board.k]
        vals, used = _kernels.cb_run(rng_seed(rng), board.k, catalog, limit)
        if used < 0:
            return None
        return GenerationRecord(Puzzle(board, vals), GeneratorKind.CONTROLLED_BIAS, int(used))
    used = 0
    while not limit or used < limit:
        grid = grid_source(rng)
        used += 1
        perm = rng.permutation(board.cells)
        j, ok = _kernels.cb_try(grid.values, perm, board.k)
        if ok:
            vals = grid.values.copy()
            vals[perm[:j]] = 0
            return GenerationRecord(Puzzle(board, vals), GeneratorKind.CONTROLLED_BIAS, used)
    return None


# -- batches ------------------------------------------------------------------


@dataclass
class Batch:
    """Generated puzzles as arrays: ``values[i]`` and ``grids_consumed[i]``."""

    kind: GeneratorKind
    board: Board
    seed: int
    values: np.ndarray
    grids_consumed: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    @property
    def clue_counts(self) -> np.ndarray:
        return np.count_nonzero(self.values, axis=1)

    @property
    def on(self) -> dict[int, int]:
        ns, cs = np.unique(self.clue_counts, return_counts=True)
        return {int(n): int(c) for n, c in zip(ns, cs)}

    @property
    def total_grids(self) -> int:
        return int(self.grids_consumed.sum())

    def puzzle(self, i: int) -> Puzzle:
        return Puzzle(self.board, self.values[i])

    def records(self) -> Iterator[GenerationRecord]:
        for i in range(len(self)):
            yield GenerationRecord(
                self.puzzle(i), self.kind, int(self.grids_consumed[i]), f"seed={self.seed}/index={i}"
            )


def _one(kind: GeneratorKind, board: Board, rng, source) -> GenerationRecord:
    if kind is GeneratorKind.BOTTOM_UP:
        return bottom_up_one(rng, board)
    if kind is GeneratorKind.TOP_DOWN:
        grid = source(rng) if source is not None else random_complete_grid(rng, board)
        return top_down_one(rng, grid)
    return controlled_bias_one(rng, source, board)


def _chunk(kind, k, seed, start, stop, source):
    from .board import get_board

    board = get_board(k)
    vals = np.empty((stop - start, board.cells), dtype=np.int8)
    grids = np.empty(stop - start, dtype=np.int64)
    for i in range(start, stop):
        rec = _one(kind, board, record_rng(seed, i), source)
        vals[i - start] = rec.puzzle.values
        grids[i - start] = rec.grids_consumed
    return vals, grids


def iter_batch(
    kind: GeneratorKind | str,
    count: int,
    seed: int,
    worker_count: int = 1,
    board: Board | None = None,
    grid_source: GridSource | None = None,
    chunk_size: int = 64,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(values, grids_consumed)`` chunks in record order."""
    kind = GeneratorKind(kind)
    if count < 1 or worker_count < 1:
        raise ValueError("count and worker_count must be >= 1")
    if board is None:
        raise ValueError("board is required")
    bounds = [(a, min(a + chunk_size, count)) for a in range(0, count, chunk_size)]
    if worker_count == 1:
        for a, b in bounds:
            yield _chunk(kind, board.k, seed, a, b, grid_source)
        return
    with ProcessPoolExecutor(worker_count) as pool:
        futures = [pool.submit(_chunk, kind, board.k, seed, a, b, grid_source) for a, b in bounds]
        try:
            for fut in futures:
                yield fut.result()
        finally:
            for fut in futures:
                fut.cancel()


def generate_batch(
    kind: GeneratorKind | str,
    count: int,
    seed: int,
    worker_count: int = 1,
    board: Board | None = None,
    grid_source: GridSource | None = None,
) -> Batch:
    """``count`` puzzles; the result depends only on (kind, count, seed, board, source)."""
    chunks = list(iter_batch(kind, count, seed, worker_count, board, grid_source))
    return Batch(
        GeneratorKind(kind),
        board,
        seed,
        np.concatenate([c[0] for c in chunks]),
        np.concatenate([c[1] for c in chunks]),
    )


# -- sample files -------------------------------------------------------------


def _write_header(fh: TextIO, meta: dict) -> None:
    fh.write("# sudostats sample\n")
    for key, value in meta.items():
        fh.write(f"# {key}={value}\n")


def write_records(fh: TextIO, values: np.ndarray, grids: np.ndarray, board: Board) -> None:
    for row, g in zip(values, grids):
        fh.write(f"{format_values(row)}\t{int(np.count_nonzero(row))}\t{int(g)}\n")


def write_sample(path: str | os.PathLike, batch: Batch, **meta) -> None:
    header = {
        "kind": batch.kind.value,
        "seed": batch.seed,
        "board": batch.board.side,
        "count": len(batch),
        "total_grids_consumed": batch.total_grids,
        **batch.meta,
        **meta,
    }
    with open(path, "w") as fh:
        _write_header(fh, header)
        write_records(fh, batch.values, batch.grids_consumed, batch.board)


def _parse_meta(line: str, meta: dict) -> None:
    body = line[1:].strip()
    if "=" in body:
        key, value = body.split("=", 1)
        meta[key.strip()] = value.strip()


def read_sample(path: str | os.PathLike, board: Board | None = None) -> Batch:
    """Read a sample file; ``total_grids_consumed`` is recomputed from the records."""
    from .board import board_for_side

    meta: dict = {}
    rows, grids = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                _parse_meta(line, meta)
                continue
            if board is None:
                board = board_for_side(int(meta["board"])) if "board" in meta else _guess_board(line)
            fields = line.split("\t")
            try:
                p = parse_puzzle(fields[0], board)
            except ValueError as exc:
                raise SampleFormatError(f"{path}:{lineno}: {exc}") from None
            rows.append(p.values)
            grids.append(int(fields[2]) if len(fields) > 2 else 1)
    if board is None:
        board = board_for_side(int(meta.get("board", 9)))
    kind = GeneratorKind(meta["kind"]) if "kind" in meta else None
    values = np.array(rows, dtype=np.int8).reshape(-1, board.cells)
    return Batch(kind, board, int(meta.get("seed", -1)), values, np.array(grids, dtype=np.int64), meta)


def _guess_board(line: str) -> Board:
    from .board import board_for_side

    n = len(line.split("\t")[0].strip())
    return board_for_side(4 if n == 16 else 9)


def load_puzzles(path: str | os.PathLike, board: Board | None = None) -> list[Puzzle]:
    return [r.puzzle for r in read_sample(path, board).records()]
