"""
Rating puzzles with whips
=========================

The rating of a puzzle is the length of the longest whip needed when
singles are applied first and the shortest available whip is used next.
"""

from collections import Counter

from sudostats import get_board, nrczt_rating, solution
from sudostats.generators import generate_batch
from sudostats.rating import replay, validate_whip

board = get_board(3)
batch = generate_batch("top-down", 200, seed=3, board=board)

ratings = Counter()
hardest = None
for rec in batch.records():
    r = nrczt_rating(rec.puzzle)
    ratings[r.rating] += 1
    if hardest is None or (r.rating != "above-cap" and r.rating > hardest[1].rating):
        hardest = (rec.puzzle, r)

total = sum(ratings.values())
for level in sorted(ratings, key=str):
    print(f"level {level}: {100 * ratings[level] / total:5.1f}%")

# the trace of the hardest puzzle: every whip is re-checked clause by clause
puzzle, result = hardest
print(puzzle, "rating", result.rating, "partial whips", result.partial_whip_count)
sol = solution(puzzle)
for state, elim in replay(puzzle, result.trace):
    if elim.length >= 2:
        print(" ", elim.whip, "valid" if not validate_whip(elim.whip, state) else "INVALID")
    t = elim.target
    assert sol.values[(t.r - 1) * 9 + t.c - 1] != t.n
