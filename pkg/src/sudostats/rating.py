"""Resolution with singles and zt-whips, and the NRCZT rating.

The CSP view of Sudoku used here has four families of variables, each
taking one of ``side`` candidates:

* cell ``rc``: which value goes in row r, column c;
* ``rn``: which column holds value n in row r;
* ``cn``: which row holds value n in column c;
* ``bn``: which box position holds value n in box b.

Two candidates are linked exactly when they share a variable.  ``L0``
asserts any variable with a single candidate left (naked and hidden
singles) and propagates; ``L_n`` adds elimination by whips of length at
most ``n``, always applying a shortest available whip, targets scanned in
(row, column, value) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import _whips
from .board import Board, Candidate, Puzzle, linked
from .solver import count_solutions

__all__ = [
    "ABOVE_CAP",
    "Elimination",
    "RatingResult",
    "ResolutionState",
    "Whip",
    "apply_L0",
    "find_zt_whip",
    "init_state",
    "nrczt_rating",
    "solve_with_Ln",
    "validate_whip",
    "whip_variables",
]

ABOVE_CAP = "above-cap"
DEFAULT_CAP = 16


class UnsolvablePuzzleError(ValueError):
    """The puzzle is inconsistent or does not have exactly one solution."""


@dataclass(frozen=True, eq=False)
class ResolutionState:
    """Knowledge state: asserted values plus the remaining candidates."""

    board: Board
    assigned: np.ndarray
    alive: np.ndarray
    done: np.ndarray
    contradictory: bool = False

    def copy(self) -> "ResolutionState":
        return replace(
            self,
            assigned=self.assigned.copy(),
            alive=self.alive.copy(),
            done=self.done.copy(),
        )

    @property
    def solved(self) -> bool:
        return not self.contradictory and bool(np.all(self.assigned))

    @property
    def candidates(self) -> set[Candidate]:
        return {self.board.candidate_at(int(i)) for i in np.flatnonzero(self.alive)}

    def has(self, cand: Candidate) -> bool:
        return bool(self.alive[self.board.candidate_index(cand)])

    def value_at(self, row: int, col: int) -> int:
        """Asserted value at 1-based ``row``, ``col`` (0 if unknown)."""
        return int(self.assigned[(row - 1) * self.board.side + col - 1])

    def _kernel_args(self):
        b = self.board
        return b.candidate_vars, b.var_candidates, b.candidate_links

    def __eq__(self, other):
        if not isinstance(other, ResolutionState):
            return NotImplemented
        return (
            self.board == other.board
            and self.contradictory == other.contradictory
            and np.array_equal(self.assigned, other.assigned)
            and np.array_equal(self.alive, other.alive)
        )


def init_state(p: Puzzle) -> ResolutionState:
    """Clues asserted; every candidate not linked to a clue remains."""
    b = p.board
    state = ResolutionState(
        board=b,
        assigned=np.zeros(b.cells, dtype=np.int8),
        alive=np.ones(b.n_candidates, dtype=np.bool_),
        done=np.zeros(4 * b.cells, dtype=np.bool_),
    )
    cv, _, links = state._kernel_args()
    for cell, value in p.clues.items():
        x = cell * b.side + value - 1
        if not state.alive[x] or not _whips.assert_candidate(
            x, state.alive, state.assigned, state.done, cv, links, b.side
        ):
            raise UnsolvablePuzzleError(f"clue {value} at cell {cell} contradicts another clue")
    return state


def apply_L0(s: ResolutionState) -> ResolutionState:
    """Propagate and assert singles to a fixpoint (returns a new state)."""
    if s.contradictory:
        return s
    out = s.copy()
    status = _whips.apply_l0(out.alive, out.assigned, out.done, *out._kernel_args(), s.board.side)
    if status < 0:
        return replace(out, contradictory=True)
    return out


@dataclass(frozen=True)
class Whip:
    """A zt-whip: ``left`` holds L1..Ln, ``right`` holds R1..R(n-1)."""

    target: Candidate
    left: tuple[Candidate, ...]
    right: tuple[Candidate, ...]

    @property
    def length(self) -> int:
        return len(self.left)

    @property
    def sequence(self) -> tuple[Candidate, ...]:
        seq = []
        for i, lc in enumerate(self.left):
            seq.append(lc)
            if i < len(self.right):
                seq.append(self.right[i])
        return tuple(seq)

    def __str__(self):
        parts = [f"{lc}-{rc}" for lc, rc in zip(self.left, self.right)]
        parts.append(f"{self.left[-1]}-.")
        return f"whip[{self.length}]: {' '.join(parts)} => not {self.target}"


def _whip_from_indices(board: Board, target: int, seq) -> Whip:
    seq = [int(x) for x in seq]
    return Whip(
        target=board.candidate_at(int(target)),
        left=tuple(board.candidate_at(x) for x in seq[0::2]),
        right=tuple(board.candidate_at(x) for x in seq[1::2]),
    )


def _scratch(board: Board, max_len: int):
    return (
        np.zeros(board.n_candidates, dtype=np.int16),
        np.zeros(4 * board.cells, dtype=np.int16),
        np.zeros(board.n_candidates, dtype=np.bool_),
        np.empty(2 * max_len + 1, dtype=np.int64),
        np.zeros(1, dtype=np.int64),
    )


def find_zt_whip(s: ResolutionState, target: Candidate, max_len: int) -> Whip | None:
    """First whip of length <= max_len found on ``target`` (shortest first).

    None when the target's cell already holds an asserted value.
    """
    if s.value_at(target.r, target.c):
        return None
    if not s.has(target):
        raise ValueError(f"{target} is not a candidate of this state")
    b = s.board
    blocked, varhit, used, out, counter = _scratch(b, max_len)
    z = b.candidate_index(target)
    for length in range(1, max_len + 1):
        got = _whips.search_whip(
            z, length, s.alive, s.done, *s._kernel_args(), blocked, varhit, used, out, counter
        )
        if got:
            return _whip_from_indices(b, z, out[: 2 * got - 1])
    return None


# -- independent whip checker ----------------------------------------------


def whip_variables(cand: Candidate, board: Board) -> tuple:
    """The four CSP variables a candidate belongs to."""
    box = ((cand.r - 1) // board.k) * board.k + (cand.c - 1) // board.k
    return (("rc", cand.r, cand.c), ("rn", cand.r, cand.n), ("cn", cand.c, cand.n), ("bn", box, cand.n))


def validate_whip(whip: Whip, state: ResolutionState) -> list[str]:
    """Check every defining clause of ``whip`` in ``state``.

    Returns the list of violated clauses (empty when the whip is valid).
    Only uses :func:`board.linked` and the candidate set, not the search
    tables.
    """
    b = state.board
    cands = state.candidates
    by_var: dict[tuple, list[Candidate]] = {}
    for c in cands:
        for v in whip_variables(c, b):
            by_var.setdefault(v, []).append(c)

    errors = []
    n = whip.length
    if len(whip.right) != n - 1 or n < 1:
        return ["malformed: need n left and n-1 right candidates"]
    seq = whip.sequence
    everything = (whip.target,) + seq
    if len(set(everything)) != len(everything):
        errors.append("candidates are not all different")
    missing = [c for c in everything if c not in cands]
    if missing:
        errors.append(f"not candidates of the state: {missing}")

    def open_candidates(var, assumed):
        # candidates of var not excluded by the assumed ones (an assumed one counts)
        return [
            c for c in by_var.get(var, [])
            if c in assumed or not any(linked(c, a, b) for a in assumed)
        ]

    rights = (whip.target,) + whip.right
    for k in range(1, n + 1):
        lk = whip.left[k - 1]
        if not linked(lk, rights[k - 1], b):
            errors.append(f"L{k} not linked to R{k - 1}")
        assumed = set(rights[:k])
        if k < n:
            rk = whip.right[k - 1]
            ok = any(
                rk in by_var.get(v, []) and open_candidates(v, assumed) == [rk]
                for v in whip_variables(lk, b)
            )
            if not ok:
                errors.append(f"R{k} is not the only compatible candidate of a variable shared with L{k}")
        else:
            ok = any(not open_candidates(v, assumed) for v in whip_variables(lk, b))
            if not ok:
                errors.append(f"L{n}'s variable keeps a compatible candidate")
    return errors


# -- solving and rating ----------------------------------------------------


@dataclass(frozen=True)
class Elimination:
    target: Candidate
    whip: Whip

    @property
    def length(self) -> int:
        return self.whip.length


@dataclass
class Trace:
    """Eliminations applied in order, and the count of partial whips explored."""

    eliminations: list[Elimination] = field(default_factory=list)
    partial_whips: int = 0

    @property
    def hardest(self) -> int:
        return max((e.length for e in self.eliminations), default=0)


def _run(p: Puzzle, n: int):
    state = init_state(p)
    b = p.board
    trace_rows = np.empty((b.n_candidates, 2 * max(n, 1) + 2), dtype=np.int64)
    status, steps, hardest, partial = _whips.solve(
        n, state.alive, state.assigned, state.done, *state._kernel_args(), b.side, trace_rows
    )
    trace = Trace(partial_whips=int(partial))
    for row in trace_rows[:steps]:
        length = int(row[1])
        whip = _whip_from_indices(b, row[0], row[2 : 2 * length + 1])
        trace.eliminations.append(Elimination(whip.target, whip))
    final = state if status >= 0 else replace(state, contradictory=True)
    return int(status), trace, final


def solve_with_Ln(p: Puzzle, n: int) -> tuple[bool, Trace]:
    """Solve with singles plus whips of length <= n.

    Raises :class:`UnsolvablePuzzleError` if the resolution reaches a
    contradiction (the puzzle has no solution).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    status, trace, _ = _run(p, n)
    if status < 0:
        raise UnsolvablePuzzleError("contradiction reached; the puzzle has no solution")
    return status == 1, trace


@dataclass(frozen=True)
class RatingResult:
    """``rating`` is an int, or :data:`ABOVE_CAP` when L_cap does not solve."""

    rating: Union[int, str]
    trace: Trace
    partial_whip_count: int

    @property
    def above_cap(self) -> bool:
        return self.rating == ABOVE_CAP


def nrczt_rating(p: Puzzle, cap: int = DEFAULT_CAP, check_unique: bool = True) -> RatingResult:
    """Smallest n such that L_n solves ``p`` (or ABOVE_CAP).

    With the shortest-first strategy, the run of L_cap coincides with the
    run of L_n until L_n would need a longer whip, so a single run with
    ``cap`` gives the rating as the longest whip it used.
    """
    if check_unique and count_solutions(p, 2) != 1:
        raise UnsolvablePuzzleError("rating needs a puzzle with exactly one solution")
    status, trace, _ = _run(p, cap)
    if status < 0:
        raise UnsolvablePuzzleError("contradiction reached; the puzzle has no solution")
    rating = trace.hardest if status == 1 else ABOVE_CAP
    return RatingResult(rating, trace, trace.partial_whips)


def replay(p: Puzzle, trace: Trace):
    """Yield ``(state, elimination)`` with the state each whip was found in."""
    state = apply_L0(init_state(p))
    for elim in trace.eliminations:
        yield state, elim
        nxt = state.copy()
        nxt.alive[state.board.candidate_index(elim.target)] = False
        state = apply_L0(nxt)
