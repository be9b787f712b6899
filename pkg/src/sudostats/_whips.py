"""Numba kernels of the resolution engine.

State is three arrays: ``alive[cand]`` (candidate still possible and not
asserted), ``assigned[cell]`` (asserted value or 0) and ``done[var]``
(variable holds an asserted candidate).  Geometry comes from
``Board.candidate_vars`` / ``var_candidates`` / ``candidate_links``.

Trace rows written by :func:`solve` hold ``target, length, L1, R1, ...,
L_length`` (unused slots are -1).
"""

import numba as nb
import numpy as np


@nb.njit(cache=True)
def assert_candidate(x, alive, assigned, done, cand_vars, links, side):
    for j in range(4):
        if done[cand_vars[x, j]]:
            return False
    assigned[x // side] = x % side + 1
    for j in range(4):
        done[cand_vars[x, j]] = True
    alive[x] = False
    for y in links[x]:
        alive[y] = False
    return True


@nb.njit(cache=True)
def apply_l0(alive, assigned, done, cand_vars, var_cands, links, side):
    """Singles to fixpoint over all four variable families.

    Returns 1 if solved, 0 if stuck, -1 on contradiction.
    """
    nvars = var_cands.shape[0]
    changed = True
    while changed:
        changed = False
        for var in range(nvars):
            if done[var]:
                continue
            cnt = 0
            last = -1
            for c in var_cands[var]:
                if alive[c]:
                    cnt += 1
                    last = c
                    if cnt > 1:
                        break
            if cnt == 0:
                return -1
            if cnt == 1:
                if not assert_candidate(last, alive, assigned, done, cand_vars, links, side):
                    return -1
                changed = True
    for v in assigned:
        if v == 0:
            return 0
    return 1


@nb.njit(cache=True)
def _mark(x, delta, blocked, varhit, cand_vars, links):
    blocked[x] += delta
    for y in links[x]:
        blocked[y] += delta
    for j in range(4):
        varhit[cand_vars[x, j]] += delta


@nb.njit(cache=True)
def search_whip(target, maxlen, alive, done, cand_vars, var_cands, links,
                blocked, varhit, used, out, counter):
    """Depth-first search for a zt-whip on ``target`` of length <= maxlen.

    ``blocked`` counts, per candidate, how many of {target, R1, ...} it
    equals or is linked to; a variable holding one of those can never be
    emptied and is skipped via ``varhit``.  The scratch arrays must be zero
    on entry and are zero again on return.  On success the whip is written
    to ``out`` as ``L1, R1, ..., Ln`` and its length returned; otherwise 0.
    ``counter[0]`` accumulates the number of partial whips extended.
    """
    nl = links.shape[1]
    prev = np.empty(maxlen + 2, np.int64)
    li = np.zeros(maxlen + 2, np.int64)
    vi = np.zeros(maxlen + 2, np.int64)
    curl = np.empty(maxlen + 2, np.int64)
    curr = np.empty(maxlen + 2, np.int64)
    _mark(target, 1, blocked, varhit, cand_vars, links)
    d = 1
    prev[1] = target
    found = 0
    while d >= 1:
        pushed = False
        while li[d] < nl:
            lc = links[prev[d], li[d]]
            if not alive[lc] or used[lc] or vi[d] >= 4:
                li[d] += 1
                vi[d] = 0
                continue
            var = cand_vars[lc, vi[d]]
            vi[d] += 1
            if done[var] or varhit[var] > 0:
                continue
            cnt = 0
            last = -1
            for c in var_cands[var]:
                if alive[c] and blocked[c] == 0:
                    cnt += 1
                    last = c
                    if cnt > 1:
                        break
            if cnt == 0:
                curl[d] = lc
                found = d
                break
            if cnt == 1 and d < maxlen:
                curl[d] = lc
                curr[d] = last
                used[lc] = True
                _mark(last, 1, blocked, varhit, cand_vars, links)
                counter[0] += 1
                d += 1
                prev[d] = last
                li[d] = 0
                vi[d] = 0
                pushed = True
                break
        if found:
            break
        if pushed:
            continue
        d -= 1
        if d >= 1:
            used[curl[d]] = False
            _mark(curr[d], -1, blocked, varhit, cand_vars, links)
    if found:
        for j in range(1, found):
            out[2 * j - 2] = curl[j]
            out[2 * j - 1] = curr[j]
            used[curl[j]] = False
            _mark(curr[j], -1, blocked, varhit, cand_vars, links)
        out[2 * found - 2] = curl[found]
    _mark(target, -1, blocked, varhit, cand_vars, links)
    return found


@nb.njit(cache=True)
def find_elimination(maxlen, alive, assigned, done, cand_vars, var_cands, links,
                     blocked, varhit, used, out, counter, side):
    """Shortest whip over all targets: lengths 1..maxlen in turn, targets in
    candidate-index order within a length.  Returns ``(target, length)`` or
    ``(-1, 0)``."""
    ncand = alive.shape[0]
    for length in range(1, maxlen + 1):
        for z in range(ncand):
            if not alive[z] or assigned[z // side] != 0:
                continue
            got = search_whip(z, length, alive, done, cand_vars, var_cands, links,
                              blocked, varhit, used, out, counter)
            if got:
                return z, got
    return -1, 0


@nb.njit(cache=True)
def solve(maxlen, alive, assigned, done, cand_vars, var_cands, links, side, trace):
    """Alternate singles and shortest-whip eliminations.

    Returns ``(status, steps, hardest, partial)``: status 1 solved, 0 stuck,
    -1 contradiction; ``steps`` trace rows used; ``hardest`` the longest whip
    applied; ``partial`` the number of partial whips explored.
    """
    ncand = alive.shape[0]
    nvars = var_cands.shape[0]
    blocked = np.zeros(ncand, np.int16)
    varhit = np.zeros(nvars, np.int16)
    used = np.zeros(ncand, np.bool_)
    out = np.empty(2 * maxlen + 1, np.int64)
    counter = np.zeros(1, np.int64)
    steps = 0
    hardest = 0
    while True:
        status = apply_l0(alive, assigned, done, cand_vars, var_cands, links, side)
        if status != 0 or maxlen == 0:
            return status, steps, hardest, counter[0]
        z, length = find_elimination(maxlen, alive, assigned, done, cand_vars, var_cands,
                                     links, blocked, varhit, used, out, counter, side)
        if z < 0:
            return 0, steps, hardest, counter[0]
        alive[z] = False
        if length > hardest:
            hardest = length
        if steps < trace.shape[0]:
            trace[steps, :] = -1
            trace[steps, 0] = z
            trace[steps, 1] = length
            for j in range(2 * length - 1):
                trace[steps, 2 + j] = out[j]
        steps += 1
