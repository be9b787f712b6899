"""Board geometry, puzzles, candidates and the line format.

A board of box side ``k`` has ``side = k*k`` rows, columns and boxes and
``cells = side*side`` cells.  Cells are numbered row-major from 0; rows,
columns and values are 1-based in the public API (``Candidate``), as in
the usual ``n r c`` notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "Board",
    "Candidate",
    "Grid",
    "Puzzle",
    "PuzzleFormatError",
    "format_puzzle",
    "format_values",
    "get_board",
    "linked",
    "parse_puzzle",
    "peers",
    "read_puzzle_lines",
]


class PuzzleFormatError(ValueError):
    """Raised for malformed or inconsistent puzzle text."""


@dataclass(frozen=True)
class Board:
    """Geometry of a ``k^2 x k^2`` Sudoku board (k = 2 or 3)."""

    k: int

    def __post_init__(self):
        if self.k not in (2, 3):
            raise ValueError(f"box side must be 2 or 3, got {self.k}")

    @property
    def side(self) -> int:
        return self.k * self.k

    @property
    def cells(self) -> int:
        return self.side * self.side

    @property
    def n_candidates(self) -> int:
        return self.cells * self.side

    def row_of(self, cell: int) -> int:
        return cell // self.side

    def col_of(self, cell: int) -> int:
        return cell % self.side

    def box_of(self, cell: int) -> int:
        r, c = divmod(cell, self.side)
        return (r // self.k) * self.k + c // self.k

    def cell_at(self, row: int, col: int) -> int:
        """Cell index for 0-based ``row``, ``col``."""
        return row * self.side + col

    @cached_property
    def units(self) -> np.ndarray:
        """``(3*side, side)`` array: rows, then columns, then boxes."""
        s, k = self.side, self.k
        rows = [[r * s + c for c in range(s)] for r in range(s)]
        cols = [[r * s + c for r in range(s)] for c in range(s)]
        boxes = []
        for b in range(s):
            r0, c0 = (b // k) * k, (b % k) * k
            boxes.append([(r0 + i) * s + c0 + j for i in range(k) for j in range(k)])
        out = np.array(rows + cols + boxes, dtype=np.int32)
        out.setflags(write=False)
        return out

    @cached_property
    def cell_units(self) -> np.ndarray:
        """``(cells, 3)`` unit indices (row, column, box) of every cell."""
        out = np.empty((self.cells, 3), dtype=np.int32)
        for cell in range(self.cells):
            out[cell] = (
                self.row_of(cell),
                self.side + self.col_of(cell),
                2 * self.side + self.box_of(cell),
            )
        out.setflags(write=False)
        return out

    @cached_property
    def peer_table(self) -> np.ndarray:
        """``(cells, n_peers)`` array of peer cells, sorted per row."""
        table = []
        for cell in range(self.cells):
            ps = set()
            for u in self.cell_units[cell]:
                ps.update(int(x) for x in self.units[u])
            ps.discard(cell)
            table.append(sorted(ps))
        out = np.array(table, dtype=np.int32)
        out.setflags(write=False)
        return out

    @property
    def n_peers(self) -> int:
        return 3 * self.side - 2 * self.k - 1

    # -- candidate space used by the resolution engine ----------------------
    #
    # candidate index = cell * side + (value - 1)
    # variables: cell (r,c) | row-value (r,n) | column-value (c,n) | box-value (b,n)

    def candidate_index(self, cand: "Candidate") -> int:
        return ((cand.r - 1) * self.side + (cand.c - 1)) * self.side + cand.n - 1

    def candidate_at(self, index: int) -> "Candidate":
        cell, v = divmod(index, self.side)
        r, c = divmod(cell, self.side)
        return Candidate(v + 1, r + 1, c + 1)

    @cached_property
    def candidate_vars(self) -> np.ndarray:
        """``(n_candidates, 4)`` variable ids of each candidate."""
        s = self.side
        out = np.empty((self.n_candidates, 4), dtype=np.int32)
        for cell in range(self.cells):
            r, c, b = self.row_of(cell), self.col_of(cell), self.box_of(cell)
            for v in range(s):
                out[cell * s + v] = (
                    cell,
                    self.cells + r * s + v,
                    2 * self.cells + c * s + v,
                    3 * self.cells + b * s + v,
                )
        out.setflags(write=False)
        return out

    @cached_property
    def var_candidates(self) -> np.ndarray:
        """``(4*cells, side)`` candidates belonging to each variable."""
        out = np.empty((4 * self.cells, self.side), dtype=np.int32)
        fill = np.zeros(4 * self.cells, dtype=np.int32)
        for cand, vs in enumerate(self.candidate_vars):
            for var in vs:
                out[var, fill[var]] = cand
                fill[var] += 1
        assert (fill == self.side).all()
        out.setflags(write=False)
        return out

    @cached_property
    def candidate_links(self) -> np.ndarray:
        """``(n_candidates, side-1+n_peers)`` candidates linked to each one."""
        rows = []
        for cand in range(self.n_candidates):
            ls = set()
            for var in self.candidate_vars[cand]:
                ls.update(int(x) for x in self.var_candidates[var])
            ls.discard(cand)
            rows.append(sorted(ls))
        out = np.array(rows, dtype=np.int32)
        out.setflags(write=False)
        return out


@lru_cache(maxsize=None)
def get_board(k: int) -> Board:
    """Shared board instance (geometry tables are computed once)."""
    return Board(k)


def board_for_side(side: int) -> Board:
    """Board from its side length (4 or 9), the form used on the command line."""
    if side == 4:
        return get_board(2)
    if side == 9:
        return get_board(3)
    raise ValueError(f"board side must be 4 or 9, got {side}")


class Candidate(NamedTuple):
    """A value ``n`` for the cell at row ``r``, column ``c`` (all 1-based)."""

    n: int
    r: int
    c: int

    def __str__(self):
        return f"{self.n}r{self.r}c{self.c}"


def _share_unit(board: Board, a: Candidate, b: Candidate) -> bool:
    if a.r == b.r or a.c == b.c:
        return True
    k = board.k
    return (a.r - 1) // k == (b.r - 1) // k and (a.c - 1) // k == (b.c - 1) // k


def linked(a: Candidate, b: Candidate, board: Board) -> bool:
    """True if ``a`` and ``b`` cannot both be true: same cell with different
    values, or same value in two cells sharing a unit."""
    same_cell = a.r == b.r and a.c == b.c
    if a.n != b.n:
        return same_cell
    return not same_cell and _share_unit(board, a, b)


def peers(cell: int, board: Board) -> frozenset[int]:
    """All cells other than ``cell`` that share a row, column or box with it."""
    return frozenset(int(x) for x in board.peer_table[cell])


@dataclass(frozen=True, eq=False)
class Puzzle:
    """An assignment of clues to cells; ``values[cell] == 0`` means empty.

    The value array is read-only.  Equality and hashing are by content.
    Consistency (no repeated value in a unit) is checked on construction.
    """

    board: Board
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.int8).reshape(-1)
        if vals.size != self.board.cells:
            raise PuzzleFormatError(
                f"expected {self.board.cells} cells, got {vals.size}"
            )
        if vals.min() < 0 or vals.max() > self.board.side:
            raise PuzzleFormatError("value out of range")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        bad = _first_conflict(self.board, vals)
        if bad is not None:
            raise PuzzleFormatError(f"value {bad[1]} repeated in unit {bad[0]}")

    @classmethod
    def empty(cls, board: Board) -> "Puzzle":
        return cls(board, np.zeros(board.cells, dtype=np.int8))

    @property
    def n_clues(self) -> int:
        return int(np.count_nonzero(self.values))

    @property
    def clue_cells(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    @property
    def clues(self) -> dict[int, int]:
        return {int(c): int(self.values[c]) for c in self.clue_cells}

    def with_clue(self, cell: int, value: int) -> "Puzzle":
        vals = self.values.copy()
        vals[cell] = value
        return Puzzle(self.board, vals)

    def without(self, cell: int) -> "Puzzle":
        vals = self.values.copy()
        vals[cell] = 0
        return Puzzle(self.board, vals)

    def __eq__(self, other):
        if not isinstance(other, Puzzle):
            return NotImplemented
        return self.board == other.board and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.board.k, self.values.tobytes()))

    def __str__(self):
        return format_puzzle(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_puzzle(self)!r})"


class Grid(Puzzle):
    """A complete puzzle: every cell filled, every unit a permutation."""

    def __post_init__(self):
        super().__post_init__()
        if np.count_nonzero(self.values) != self.board.cells:
            raise PuzzleFormatError("a grid must have every cell filled")

    @classmethod
    def from_puzzle(cls, p: Puzzle) -> "Grid":
        return cls(p.board, p.values)


def _first_conflict(board: Board, vals: np.ndarray):
    seen = np.sort(vals[board.units], axis=1)
    dup = (seen[:, 1:] == seen[:, :-1]) & (seen[:, 1:] > 0)
    if not dup.any():
        return None
    u, j = np.argwhere(dup)[0]
    return int(u), int(seen[u, j + 1])


def parse_puzzle(text: str, board: Board) -> Puzzle:
    """Parse one row-major puzzle line ('.' or '0' for empty cells).

    Returns a :class:`Grid` when every cell is filled.
    """
    text = text.strip()
    if len(text) != board.cells:
        raise PuzzleFormatError(f"expected {board.cells} characters, got {len(text)}")
    vals = np.zeros(board.cells, dtype=np.int8)
    for i, ch in enumerate(text):
        if ch in ".0":
            continue
        if not ch.isdigit() or not 1 <= int(ch) <= board.side:
            raise PuzzleFormatError(f"invalid character {ch!r} at position {i}")
        vals[i] = int(ch)
    if np.count_nonzero(vals) == board.cells:
        return Grid(board, vals)
    return Puzzle(board, vals)


_SYMBOLS = np.array(list(".123456789"))


def format_values(values: np.ndarray) -> str:
    """Line text of a raw value array (no consistency check)."""
    return "".join(_SYMBOLS[np.asarray(values, dtype=np.intp)])


def format_puzzle(p: Puzzle) -> str:
    return format_values(p.values)


def read_puzzle_lines(lines: Iterable[str]) -> Iterator[str]:
    """Yield the first tab-separated field of every non-comment, non-blank line."""
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        yield line.split("\t", 1)[0]
