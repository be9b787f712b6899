"""Counting minimal puzzles from a controlled-bias sample.

One controlled-bias attempt on a complete grid outputs a given n-clue
minimal sub-puzzle with probability ``P(n) = 1/C(cells, n)``.  The expected
number of n-clue outputs per grid attempt is therefore ``count(n) * P(n)``,
where ``count(n)`` is the mean number of n-clue minimal puzzles per grid,
which inverts to ``count(n) = on(n) / (grids_consumed * P(n))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .bias import path_probability

__all__ = [
    "CensusEstimate",
    "GRIDS_9X9",
    "NONISOMORPHIC_GRIDS_9X9",
    "estimate_counts_per_grid",
    "estimate_success_rate",
    "estimate_tries",
    "totals",
]

# published complete-grid counts, used only as multipliers
GRIDS_9X9 = 6_670_903_752_021_072_936_960
NONISOMORPHIC_GRIDS_9X9 = 5_472_730_538


def estimate_success_rate(total_outputs: int, total_grids_consumed: int) -> float:
    """Outputs per complete grid attempted."""
    if total_grids_consumed < 1 or total_outputs < 1:
        raise ValueError("need at least one output and one grid attempt")
    return total_outputs / total_grids_consumed


@dataclass
class CensusEstimate:
    cells: int
    total_outputs: int
    success_rate: float
    on: dict[int, int] = field(default_factory=dict)
    count: dict[int, float] = field(default_factory=dict)
    rel_err: dict[int, float] = field(default_factory=dict)

    @property
    def grids_consumed(self) -> float:
        return self.total_outputs / self.success_rate

    @classmethod
    def from_counts(cls, count: Mapping[int, float], cells: int,
                    rel_err: Mapping[int, float] | None = None) -> "CensusEstimate":
        """Wrap already-known per-grid counts (e.g. published ones)."""
        return cls(
            cells=cells,
            total_outputs=0,
            success_rate=float("nan"),
            count=dict(sorted(count.items())),
            rel_err=dict(rel_err or {}),
        )


def estimate_counts_per_grid(
    on: Mapping[int, float], total_outputs: int, s: float, cells: int
) -> CensusEstimate:
    """``count(n) = (on(n)/total) * s / P(n)`` with ``rel_err = 1/sqrt(on(n))``.

    ``on`` may hold expected (non-integer) tallies; empty bins are dropped.
    """
    est = CensusEstimate(cells=cells, total_outputs=total_outputs, success_rate=s)
    for n, k in sorted(on.items()):
        if k <= 0:
            continue
        est.on[n] = k
        est.count[n] = (k / total_outputs) * s / float(path_probability(n, cells))
        est.rel_err[n] = 1.0 / math.sqrt(k)
    return est


def estimate_tries(count: Mapping[int, float], cells: int) -> dict[int, float]:
    """Mean number of random n-clue sub-grids to draw per n-clue minimal."""
    out = {}
    for n, c in sorted(count.items()):
        if c <= 0:
            raise ValueError(f"count({n}) must be positive")
        out[n] = float(Fraction(math.comb(cells, n)) / Fraction(c))
    return out


@dataclass(frozen=True)
class CensusTotals:
    per_grid: float
    total: float
    rel_err: float


def totals(estimate: CensusEstimate, n_grids: int) -> CensusTotals:
    """Sum of ``count(n)`` per grid and times ``n_grids``.

    The relative error combines the per-bin errors as independent ones.
    """
    per_grid = sum(estimate.count.values())
    var = sum((estimate.count[n] * estimate.rel_err.get(n, 0.0)) ** 2 for n in estimate.count)
    rel = math.sqrt(var) / per_grid if per_grid else float("nan")
    return CensusTotals(per_grid, per_grid * n_grids, rel)
