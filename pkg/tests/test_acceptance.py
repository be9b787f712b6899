"""Acceptance criteria 1-9, one PASS/FAIL line each.

Large samples are generated once and cached under tests/cache (override
with SUDOSTATS_TEST_CACHE).  The 9x9 controlled-bias sample takes about an
hour on one core; produce it ahead of time with

    sudostats generate --kind ctr-bias --count 200 --seed 2026 --board 9 \\
        -o tests/cache/ctr-bias-9x9-200.txt
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction

import numba as nb
import numpy as np
import pytest
from scipy import stats as sps

from sudostats import Puzzle, get_board, nrczt_rating, solution
from sudostats import _kernels
from sudostats.bias import (
    BiasModel,
    SampleStats,
    correction_factors,
    transition_ratio,
    unbiased_mean,
    unbiased_sd,
)
from sudostats.census import (
    GRIDS_9X9,
    CensusEstimate,
    estimate_counts_per_grid,
    estimate_success_rate,
    estimate_tries,
    totals,
)
from sudostats.generators import GridCatalog, generate_batch, read_sample
from sudostats.rating import ABOVE_CAP

from helpers import CACHE, VERDICTS, cached_batch, first_row_clues, oracle

PUBLISHED_CF = [0.00134, 0.00415, 0.0120, 0.0329, 0.0843, 0.204, 0.464, 1, 2.037, 3.929, 7.180, 12.445, 20.474]
TABLE5 = {
    20: 6.152e6, 21: 1.4654e9, 22: 1.6208e12, 23: 6.8827e12, 24: 1.0637e14, 25: 6.2495e14,
    26: 1.4855e15, 27: 1.5228e15, 28: 7.2063e14, 29: 1.6751e14, 30: 1.9277e13, 31: 1.1240e12,
    32: 4.7465e10,
}

CB4_COUNT = 1_250_000
CB9_FILE = CACHE / "ctr-bias-9x9-200.txt"


def verdict(number: int, ok: bool, what: str, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {what} | {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


# -- samples ------------------------------------------------------------------


@pytest.fixture(scope="module")
def cb4():
    o = oracle()
    return cached_batch("ctr-bias-4x4", "ctr-bias", CB4_COUNT, 2024, o.board, GridCatalog(o.board, o.grids))


@pytest.fixture(scope="module")
def bu9():
    return cached_batch("bottom-up-9x9", "bottom-up", 2000, 11, get_board(3))


@pytest.fixture(scope="module")
def td9():
    return cached_batch("top-down-9x9", "top-down", 2000, 12, get_board(3))


@pytest.fixture(scope="module")
def cb9():
    if not CB9_FILE.exists():
        batch = generate_batch("ctr-bias", 200, 2026, 1, get_board(3))
        from sudostats.generators import write_sample

        write_sample(CB9_FILE, batch)
    return read_sample(CB9_FILE)


def rate_all(name: str, values: np.ndarray, board) -> dict:
    """Ratings plus a soundness audit of every elimination (cached)."""
    path = CACHE / f"ratings-{name}.npz"
    if path.exists():
        data = np.load(path)
        if len(data["rating"]) == len(values):
            return {k: data[k] for k in data.files}
    ratings = np.empty(len(values), dtype=np.int16)
    partial = np.empty(len(values), dtype=np.int64)
    eliminations = np.zeros(len(values), dtype=np.int64)
    unsound = np.zeros(len(values), dtype=np.int64)
    for i, vals in enumerate(values):
        p = Puzzle(board, vals)
        r = nrczt_rating(p)
        sol = solution(p).values
        ratings[i] = -1 if r.rating == ABOVE_CAP else r.rating
        partial[i] = r.partial_whip_count
        for e in r.trace.eliminations:
            t = e.target
            eliminations[i] += 1
            unsound[i] += sol[(t.r - 1) * board.side + t.c - 1] == t.n
    out = dict(rating=ratings, partial=partial, eliminations=eliminations, unsound=unsound)
    CACHE.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, **out)
    return out


# -- criteria -------------------------------------------------------------------


def test_criterion_1_cf_sequence():
    cf = correction_factors(19, 31, 26, 81)
    got = [float(v) for v in cf.values()]
    rel = [abs(g - p) / p for g, p in zip(got, PUBLISHED_CF)]
    ok = len(got) == 13 and max(rel) <= 5e-3
    worst = int(np.argmax(rel))
    verdict(1, ok, "cf(19..31), anchor 26, to 3 significant digits",
            f"max relative gap {max(rel):.2e} at n={19 + worst} ({got[worst]:.5g} vs {PUBLISHED_CF[worst]})")


def test_criterion_2_ratio():
    r = Fraction(1)
    for n in range(24, 30):
        r /= transition_ratio(n, 81)
    ok = abs(float(r) - 61.12) <= 0.01
    verdict(2, ok, "Pr(24)/Pr(30) = 61.12 +/- 0.01", f"exact {r} = {float(r):.5f}")


def test_criterion_3_uniformity(cb4):
    o = oracle()
    idx = o.index_of(cb4.values)
    members = bool((idx >= 0).all())
    hits = np.bincount(idx[idx >= 0], minlength=len(o.minimals))
    details, ok = [], members
    for n, size in o.counts.items():
        observed = hits[o.clues == n]
        expected = observed.sum() / size
        chi2, p = sps.chisquare(observed)
        ok &= p > 0.001 and expected >= 5
        details.append(f"n={n}: {observed.sum()} outputs over {size} puzzles, E={expected:.1f}, p={p:.3f}")
    verdict(3, ok, f"4x4 per-n chi-square vs uniform, {len(cb4)} outputs, all in oracle={members}",
            "; ".join(details))


def _batch_means(values, estimator, parts=25):
    chunks = np.array_split(np.arange(len(values)), parts)
    ests = np.array([estimator(values[c]) for c in chunks])
    return ests.std(ddof=1) / math.sqrt(parts)


def test_criterion_4_estimators(cb4):
    o = oracle()
    model = BiasModel(16, 5)

    def estimates(values):
        clues = np.count_nonzero(values, axis=1)
        st = SampleStats.from_arrays(clues, {"clues": clues, "row1": first_row_clues(values, 4)})
        return (
            unbiased_mean(st, "clues", model),
            unbiased_mean(st, "row1", model),
            unbiased_sd(st, "row1", model),
            unbiased_sd(st, "clues", model),
        )

    got = estimates(cb4.values)
    row1 = first_row_clues(o.minimals, 4)
    pooled = math.sqrt(
        sum(((row1[o.clues == n] - row1[o.clues == n].mean()) ** 2).sum() for n in o.counts) / len(row1)
    )
    exact = (o.clues.mean(), row1.mean(), pooled, 0.0)
    se = [_batch_means(cb4.values, lambda v, k=k: estimates(v)[k]) for k in range(3)]
    z = [abs(g - e) / s for g, e, s in zip(got[:3], exact[:3], se)]
    ok = max(z) <= 3 and got[3] == 0.0
    verdict(4, ok, "4x4 unbiased mean / sd vs exact population",
            f"mean(clues) {got[0]:.5f} vs {exact[0]:.5f} ({z[0]:.2f} SE); "
            f"mean(row-1 clues) {got[1]:.5f} vs {exact[1]:.5f} ({z[1]:.2f} SE); "
            f"sd(row-1 clues) {got[2]:.5f} vs {exact[2]:.5f} ({z[2]:.2f} SE); sd(clues) {got[3]}")


@nb.njit(cache=True)
def _subgrid_hits(grids, n, draws, seed):
    np.random.seed(seed)
    cells = grids.shape[1]
    hits = 0
    vals = np.zeros(cells, dtype=np.int8)
    for _ in range(draws):
        g = grids[np.random.randint(grids.shape[0])]
        order = np.random.permutation(cells)
        vals[:] = 0
        for j in range(n):
            vals[order[j]] = g[order[j]]
        if _kernels.is_minimal(vals, 2):
            hits += 1
    return hits


def test_criterion_5_census(cb4):
    o = oracle()
    s = estimate_success_rate(len(cb4), cb4.total_grids)
    est = estimate_counts_per_grid(cb4.on, len(cb4), s, 16)
    exact = o.per_grid()
    ok = set(est.count) == set(exact)
    details = []
    tries = estimate_tries(est.count, 16)
    draws = {4: 400_000, 5: 400_000, 6: 4_000_000}
    for n in sorted(exact):
        dev = abs(est.count[n] - exact[n]) / (est.rel_err[n] * exact[n])
        h = _subgrid_hits(o.grids, n, draws[n], 700 + n)
        p = h / draws[n]
        mc = 1 / p
        sigma = math.hypot(tries[n] * est.rel_err[n], mc * math.sqrt((1 - p) / h))
        z = abs(tries[n] - mc) / sigma
        ok &= dev <= 3 and z <= 3
        details.append(f"n={n}: count {est.count[n]:.4f} vs {exact[n]:.4f} ({dev:.2f} rel_err), "
                       f"tries {tries[n]:.2f} vs MC {mc:.2f} ({z:.2f} sigma)")
    verdict(5, ok, "4x4 census vs oracle and random-subgrid Monte Carlo", "; ".join(details))


def test_criterion_6_generator_bias(bu9, td9, cb9):
    means = {k: float(np.count_nonzero(b.values, axis=1).mean()) for k, b in
             (("bu", bu9), ("td", td9), ("cb", cb9))}
    target = {"bu": (23.87, 0.3), "td": (24.38, 0.3), "cb": (25.67, 0.35)}
    sizes_ok = len(bu9) >= 2000 and len(td9) >= 2000 and len(cb9) >= 200
    ok = sizes_ok and means["bu"] < means["td"] < means["cb"]
    ok &= all(abs(means[k] - m) <= tol for k, (m, tol) in target.items())
    verdict(6, ok, "9x9 clue-count means bottom-up < top-down < controlled-bias",
            ", ".join(f"{k} {means[k]:.3f} (n={len(b)}, target {target[k][0]}+/-{target[k][1]})"
                      for k, b in (("bu", bu9), ("td", td9), ("cb", cb9))))


def test_criterion_7_rating_distribution(td9):
    r = rate_all("top-down-9x9", td9.values, td9.board)["rating"]
    zero = 100 * float((r == 0).mean())
    within5 = 100 * float(((r >= 0) & (r <= 5)).mean())
    ok = len(r) >= 1000 and abs(zero - 41.8) <= 5 and within5 >= 97
    levels = {int(k): int(v) for k, v in zip(*np.unique(r, return_counts=True))}
    verdict(7, ok, "top-down 9x9 rating distribution",
            f"{len(r)} puzzles, level 0 {zero:.2f}% (target 41.8+/-5), within L5 {within5:.2f}% (>=97), "
            f"levels {levels}")


def test_criterion_8_soundness(cb4, bu9, td9, cb9):
    o = oracle()
    seen = np.unique(o.index_of(cb4.values))
    audits = {
        "4x4 ctr-bias": rate_all("ctr-bias-4x4-distinct", o.minimals[seen[seen >= 0]], o.board),
        "9x9 bottom-up": rate_all("bottom-up-9x9", bu9.values, bu9.board),
        "9x9 top-down": rate_all("top-down-9x9", td9.values, td9.board),
        "9x9 ctr-bias": rate_all("ctr-bias-9x9", cb9.values, cb9.board),
    }
    unsound = sum(int(a["unsound"].sum()) for a in audits.values())
    elim = sum(int(a["eliminations"].sum()) for a in audits.values())
    puzzles = sum(len(a["rating"]) for a in audits.values())
    verdict(8, unsound == 0, "no elimination removes the solution value",
            f"{unsound} unsound of {elim} whip eliminations over {puzzles} puzzles")


def test_criterion_9_published_totals():
    est = CensusEstimate.from_counts(TABLE5, 81)
    t = totals(est, GRIDS_9X9)
    per_grid_gap = t.per_grid / 4.6655e15 - 1
    total_gap = t.total / 3.1055e37 - 1
    ok = abs(per_grid_gap) <= 1e-3 and abs(total_gap) <= 1e-3
    verdict(9, ok, "published per-n counts through totals",
            f"per grid {t.per_grid:.5e} vs 4.6655e15 ({100 * per_grid_gap:+.3f}%), "
            f"total {t.total:.5e} vs 3.1055e37 ({100 * total_gap:+.3f}%)")


# -- supplementary checks on the same samples (no criterion line) ---------------


def test_cb9_outputs_are_minimal(cb9):
    from sudostats import is_minimal

    assert all(is_minimal(cb9.puzzle(i)) for i in range(len(cb9)))


def test_cb9_success_rate_order_of_magnitude(cb9):
    s = estimate_success_rate(len(cb9), cb9.total_grids)
    assert 2e-6 <= s <= 8e-6


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
