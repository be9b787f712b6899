import dataclasses

import numpy as np
import pytest

from sudostats import (
    Candidate,
    Puzzle,
    apply_L0,
    find_zt_whip,
    init_state,
    nrczt_rating,
    random_complete_grid,
    solution,
    solve_with_Ln,
    validate_whip,
)
from sudostats.generators import generate_batch
from sudostats.rating import ABOVE_CAP, UnsolvablePuzzleError, replay

from helpers import random_symmetry


def singles_solve(values, k=3):
    """Naked and hidden singles only, written directly on value lists."""
    side = k * k
    vals = list(values)
    units = [[r * side + c for c in range(side)] for r in range(side)]
    units += [[r * side + c for r in range(side)] for c in range(side)]
    units += [
        [(br * k + i) * side + bc * k + j for i in range(k) for j in range(k)]
        for br in range(k)
        for bc in range(k)
    ]
    cell_units = [[u for u in units if cell in u] for cell in range(side * side)]

    def cands(cell):
        used = {vals[j] for u in cell_units[cell] for j in u}
        return [v for v in range(1, side + 1) if v not in used]

    progress = True
    while progress and 0 in vals:
        progress = False
        for cell in range(side * side):
            if vals[cell] == 0:
                cs = cands(cell)
                if len(cs) == 1:
                    vals[cell] = cs[0]
                    progress = True
        for u in units:
            for v in range(1, side + 1):
                if v in (vals[j] for j in u):
                    continue
                spots = [j for j in u if vals[j] == 0 and v in cands(j)]
                if len(spots) == 1:
                    vals[spots[0]] = v
                    progress = True
    return 0 not in vals


@pytest.fixture(scope="module")
def td9(board9):
    return generate_batch("top-down", 60, 99, 1, board9)


def test_init_state_examples(board9):
    s = init_state(Puzzle.empty(board9))
    assert len(s.candidates) == 729
    g = random_complete_grid(np.random.default_rng(0), board9)
    assert init_state(g).solved
    s = init_state(Puzzle.empty(board9).with_clue(0, 5))
    # the clue itself is asserted, not a candidate
    assert s.value_at(1, 1) == 5
    cands = s.candidates
    for c in cands:
        assert (c.r, c.c) != (1, 1)
        if c.n == 5:
            assert c.r != 1 and c.c != 1 and not (c.r <= 3 and c.c <= 3)
    assert len(cands) == 729 - 9 - 20


def test_singles_fixture_rates_zero(td9):
    found = 0
    for rec in td9.records():
        if singles_solve(rec.puzzle.values.tolist()):
            found += 1
            assert nrczt_rating(rec.puzzle).rating == 0
            assert apply_L0(init_state(rec.puzzle)).solved
        else:
            assert nrczt_rating(rec.puzzle).rating != 0
    assert found > 0


def test_l0_idempotent(td9):
    for rec in list(td9.records())[:20]:
        once = apply_L0(init_state(rec.puzzle))
        assert apply_L0(once) == once


def test_l0_keeps_solution(td9):
    for rec in list(td9.records())[:20]:
        sol = solution(rec.puzzle)
        s = apply_L0(init_state(rec.puzzle))
        for cell, v in enumerate(sol.values):
            r, c = divmod(cell, 9)
            assert s.value_at(r + 1, c + 1) == v or s.has(Candidate(int(v), r + 1, c + 1))


def test_whips_are_valid_and_sound(td9):
    checked = 0
    for rec in list(td9.records())[:25]:
        result = nrczt_rating(rec.puzzle)
        sol = solution(rec.puzzle)
        for state, elim in replay(rec.puzzle, result.trace):
            assert validate_whip(elim.whip, state) == []
            t = elim.target
            assert sol.values[(t.r - 1) * 9 + t.c - 1] != t.n
            checked += 1
    assert checked > 0


def test_find_whip_matches_trace(td9):
    for rec in list(td9.records())[:10]:
        result = nrczt_rating(rec.puzzle)
        for state, elim in replay(rec.puzzle, result.trace):
            again = find_zt_whip(state, elim.target, elim.length)
            assert again is not None and again.length == elim.length
            assert validate_whip(again, state) == []
            if elim.length > 1:
                assert find_zt_whip(state, elim.target, elim.length - 1) is None
            break


def test_validator_rejects_tampering(td9):
    for rec in td9.records():
        result = nrczt_rating(rec.puzzle)
        long = [(s, e) for s, e in replay(rec.puzzle, result.trace) if e.length >= 2]
        if not long:
            continue
        state, elim = long[0]
        w = elim.whip
        broken = dataclasses.replace(w, right=(w.left[0],) + w.right[1:])
        assert validate_whip(broken, state)
        shorter = dataclasses.replace(w, left=w.left[:-1], right=w.right[:-1])
        assert validate_whip(shorter, state)
        return
    pytest.skip("no whip of length >= 2 in the sample")


def test_no_whip_on_solved_state(board9):
    g = random_complete_grid(np.random.default_rng(1), board9)
    s = apply_L0(init_state(g))
    assert s.solved
    assert find_zt_whip(s, Candidate(int(g.values[0]), 1, 1), 5) is None


def test_rating_monotone(td9):
    for rec in list(td9.records())[:30]:
        r = nrczt_rating(rec.puzzle)
        if r.rating == ABOVE_CAP:
            continue
        assert solve_with_Ln(rec.puzzle, r.rating)[0]
        assert solve_with_Ln(rec.puzzle, r.rating + 1)[0]
        if r.rating > 0:
            assert not solve_with_Ln(rec.puzzle, r.rating - 1)[0]


def test_rating_symmetry_invariant(td9, board9):
    rng = np.random.default_rng(8)
    for rec in list(td9.records())[:30]:
        base = nrczt_rating(rec.puzzle).rating
        for _ in range(2):
            t = random_symmetry(rng, 3)
            assert nrczt_rating(Puzzle(board9, t(rec.puzzle.values))).rating == base


def test_rating_rejects_multi_solution(board9):
    with pytest.raises(UnsolvablePuzzleError):
        nrczt_rating(Puzzle.empty(board9))


def test_partial_whip_count(td9):
    counts = [nrczt_rating(rec.puzzle).partial_whip_count for rec in td9.records()]
    assert min(counts) >= 0
    zero = [nrczt_rating(rec.puzzle) for rec in td9.records()]
    assert all(r.partial_whip_count == 0 for r in zero if r.rating == 0)


def test_4x4_sample_rates(board4):
    batch = generate_batch("bottom-up", 300, 2, 1, board4)
    for rec in batch.records():
        r = nrczt_rating(rec.puzzle)
        assert r.rating == 0
