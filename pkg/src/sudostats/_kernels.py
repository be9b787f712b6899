"""Numba kernels for solution counting and puzzle generation.

Every kernel takes the board's box side ``k`` and works on flat ``int8``
value arrays (0 = empty).  Kernels that draw random numbers take a
``seed`` and reseed numba's generator on entry, so a call is a pure
function of its arguments.
"""

import numba as nb
import numpy as np

_POP = np.array([bin(i).count("1") for i in range(1 << 9)], dtype=np.int8)
_LOW = np.array([(i & -i).bit_length() - 1 if i else -1 for i in range(1 << 9)], dtype=np.int8)


def _tables(k):
    side = k * k
    n = side * side
    cells = np.arange(n)
    row = (cells // side).astype(np.int32)
    col = (cells % side).astype(np.int32)
    box = ((row // k) * k + col // k).astype(np.int32)
    units = np.empty((3 * side, side), np.int32)
    for u in range(side):
        units[u] = np.flatnonzero(row == u)
        units[side + u] = np.flatnonzero(col == u)
        units[2 * side + u] = np.flatnonzero(box == u)
    return row, col, box, units


_ROW4, _COL4, _BOX4, _UNITS4 = _tables(2)
_ROW9, _COL9, _BOX9, _UNITS9 = _tables(3)


@nb.njit(cache=True)
def _geometry(k):
    if k == 2:
        return _ROW4, _COL4, _BOX4, _UNITS4
    return _ROW9, _COL9, _BOX9, _UNITS9


@nb.njit(cache=True)
def _search(values, cap, k, seed_random, scan_units=True):
    """Depth-first fill with most-constrained-first branching.

    Counts completions of ``values`` up to ``cap``.  At each node the cell
    with fewest candidates is chosen; when no cell is forced, a value with a
    single place in some unit (or none, a dead end) takes precedence.
    With ``seed_random`` the values of a branching cell are tried in random
    order and the first completion is written back into ``values`` (used
    for grid generation).
    """
    side = k * k
    n = side * side
    full = (1 << side) - 1
    row, col, box, units = _geometry(k)
    rowm = np.zeros(side, np.int32)
    colm = np.zeros(side, np.int32)
    boxm = np.zeros(side, np.int32)
    cm = np.zeros(n, np.int32)
    empties = np.empty(n, np.int32)
    ne = 0
    for cell in range(n):
        v = values[cell]
        if v:
            bit = 1 << (v - 1)
            r = row[cell]
            c = col[cell]
            b = box[cell]
            if (rowm[r] | colm[c] | boxm[b]) & bit:
                return 0
            rowm[r] |= bit
            colm[c] |= bit
            boxm[b] |= bit
        else:
            empties[ne] = cell
            ne += 1
    if ne == 0:
        return 1
    tries = np.zeros(ne, np.int32)
    placed = np.zeros(ne, np.int32)
    count = 0
    depth = 0
    descending = True
    while True:
        if descending:
            if depth == ne:
                count += 1
                if count >= cap:
                    if seed_random:
                        for d in range(ne):
                            values[empties[d]] = _LOW[placed[d]] + 1
                    return count
                descending = False
                depth -= 1
                continue
            best = -1
            bestc = 99
            bestm = 0
            for i in range(depth, ne):
                cell = empties[i]
                m = full & ~(rowm[row[cell]] | colm[col[cell]] | boxm[box[cell]])
                pc = _POP[m]
                if pc < bestc:
                    bestc = pc
                    best = i
                    bestm = m
                    if pc <= 1:
                        break
            if bestc >= 2 and scan_units:
                # unit scan: values with no place (dead end) or one place (forced)
                for i in range(depth, ne):
                    cell = empties[i]
                    cm[cell] = full & ~(rowm[row[cell]] | colm[col[cell]] | boxm[box[cell]])
                dead = False
                forced = -1
                fbit = 0
                for u in range(3 * side):
                    if u < side:
                        have = rowm[u]
                    elif u < 2 * side:
                        have = colm[u - side]
                    else:
                        have = boxm[u - 2 * side]
                    missing = full & ~have
                    if missing == 0:
                        continue
                    seen = 0
                    twice = 0
                    for j in range(side):
                        cell = units[u, j]
                        if values[cell] == 0:
                            m = cm[cell]
                            twice |= seen & m
                            seen |= m
                    if missing & ~seen:
                        dead = True
                        break
                    once = missing & ~twice
                    if once:
                        fbit = once & -once
                        for j in range(side):
                            cell = units[u, j]
                            if values[cell] == 0 and cm[cell] & fbit:
                                forced = cell
                                break
                        break
                for i in range(depth, ne):
                    cm[empties[i]] = 0
                if dead:
                    descending = False
                    depth -= 1
                    continue
                if forced >= 0:
                    for i in range(depth, ne):
                        if empties[i] == forced:
                            best = i
                            break
                    bestm = fbit
                    bestc = 1
            if bestc == 0:
                descending = False
                depth -= 1
                continue
            tmp = empties[depth]
            empties[depth] = empties[best]
            empties[best] = tmp
            tries[depth] = bestm
            placed[depth] = 0
        else:
            if depth < 0:
                return count
            bit = placed[depth]
            if bit:
                cell = empties[depth]
                rowm[row[cell]] ^= bit
                colm[col[cell]] ^= bit
                boxm[box[cell]] ^= bit
                placed[depth] = 0
                values[cell] = 0
        m = tries[depth]
        if m == 0:
            descending = False
            depth -= 1
            continue
        if seed_random and _POP[m] > 1:
            pick = np.random.randint(_POP[m])
            bit = m & -m
            for _ in range(pick):
                m ^= bit
                bit = m & -m
            tries[depth] ^= bit
        else:
            bit = m & -m
            tries[depth] = m ^ bit
        placed[depth] = bit
        cell = empties[depth]
        rowm[row[cell]] |= bit
        colm[col[cell]] |= bit
        boxm[box[cell]] |= bit
        values[cell] = _LOW[bit] + 1
        depth += 1
        descending = True


@nb.njit(cache=True)
def count_solutions(values, cap, k):
    return _search(values.copy(), cap, k, False)


@nb.njit(cache=True)
def _fill_random(values, k):
    values[:] = 0
    _search(values, 1, k, True, False)


@nb.njit(cache=True)
def random_grid(seed, k):
    np.random.seed(seed)
    values = np.zeros(k ** 4, np.int8)
    _fill_random(values, k)
    return values


@nb.njit(cache=True)
def is_minimal(values, k):
    if _search(values.copy(), 2, k, False) != 1:
        return False
    work = values.copy()
    for cell in range(values.size):
        v = work[cell]
        if v:
            work[cell] = 0
            cnt = _search(work.copy(), 2, k, False)
            work[cell] = v
            if cnt == 1:
                return False
    return True


@nb.njit(cache=True)
def _without_prefix(grid, perm, j, out):
    out[:] = grid
    for i in range(j):
        out[perm[i]] = 0


@nb.njit(cache=True)
def cb_try(grid, perm, k):
    """One controlled-bias attempt on ``grid`` with deletion order ``perm``.

    Deleting clues one by one in ``perm`` order, the puzzles stay
    unique-solution up to some depth ``j`` and are multi-solution after it
    (uniqueness is monotone along a deletion path).  The attempt succeeds
    iff the last unique puzzle is minimal; no earlier puzzle on the path can
    be, since each has a unique child.  Returns ``(j, success)``.
    """
    n = grid.size
    work = np.empty_like(grid)
    lo = 0
    hi = n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        _without_prefix(grid, perm, mid, work)
        if _search(work, 2, k, False, False) == 1:
            lo = mid
        else:
            hi = mid
    _without_prefix(grid, perm, lo, work)
    # lo + 1 is known to be multi-solution; test the remaining clues
    for i in range(lo + 1, n):
        cell = perm[i]
        v = work[cell]
        work[cell] = 0
        cnt = _search(work.copy(), 2, k, False, False)
        work[cell] = v
        if cnt == 1:
            return lo, False
    return lo, True


@nb.njit(cache=True)
def cb_run(seed, k, catalog, max_grids):
    """Controlled-bias generator loop.

    Grids come from ``catalog`` (uniform choice) when it has rows, else
    from the random backtracking fill.  Returns ``(puzzle, grids_used)``;
    ``grids_used`` is negated if ``max_grids`` was hit without success.
    """
    np.random.seed(seed)
    n = k ** 4
    grid = np.zeros(n, np.int8)
    out = np.empty(n, np.int8)
    used = 0
    while max_grids <= 0 or used < max_grids:
        if catalog.shape[0] > 0:
            grid[:] = catalog[np.random.randint(catalog.shape[0])]
        else:
            _fill_random(grid, k)
        used += 1
        perm = np.random.permutation(n)
        j, ok = cb_try(grid, perm, k)
        if ok:
            _without_prefix(grid, perm, j, out)
            return out, used
    return out, -used


@nb.njit(cache=True)
def _reduce(work, k):
    # delete clues in random order, never retrying a failed one on the same floor
    n = work.size
    clues = np.empty(n, np.int64)
    while True:
        nc = 0
        for cell in range(n):
            if work[cell]:
                clues[nc] = cell
                nc += 1
        order = np.random.permutation(clues[:nc])
        moved = False
        for cell in order:
            v = work[cell]
            work[cell] = 0
            if _search(work.copy(), 2, k, False) == 1:
                moved = True
                break
            work[cell] = v
        if not moved:
            return


@nb.njit(cache=True)
def top_down(grid, seed, k):
    """Classical top-down deletion; a failed deletion is reinserted and the
    next clue of the current floor (random order, no repeats) is tried."""
    np.random.seed(seed)
    work = grid.copy()
    _reduce(work, k)
    return work


@nb.njit(cache=True)
def bottom_up(seed, k):
    """Classical bottom-up addition of random (cell, value) pairs.

    Pairs are drawn uniformly among (empty cell, value not already in one
    of its units).  A pair leaving no solution is forgotten and another is
    drawn; a multi-solution result becomes the new floor.  Once the puzzle
    has a unique solution, redundant clues are deleted in random order.
    Returns ``(puzzle, dead_ends)`` where ``dead_ends`` counts forgotten pairs.
    """
    np.random.seed(seed)
    side = k * k
    n = side * side
    row, col, box, _ = _geometry(k)
    work = np.zeros(n, np.int8)
    pairs = np.empty(n * side, np.int64)
    dead = 0
    while True:
        np_ = 0
        for cell in range(n):
            if work[cell]:
                continue
            for v in range(1, side + 1):
                ok = True
                for other in range(n):
                    if work[other] == v and (
                        row[other] == row[cell]
                        or col[other] == col[cell]
                        or box[other] == box[cell]
                    ):
                        ok = False
                        break
                if ok:
                    pairs[np_] = cell * side + v - 1
                    np_ += 1
        order = np.random.permutation(pairs[:np_])
        for p in order:
            cell = p // side
            v = p % side + 1
            work[cell] = v
            cnt = _search(work.copy(), 2, k, False)
            if cnt == 1:
                _reduce(work, k)
                return work, dead
            if cnt >= 2:
                break
            work[cell] = 0
            dead += 1
