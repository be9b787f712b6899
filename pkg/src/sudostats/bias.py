"""Output-probability model of the controlled-bias generator and the
reweighted (unbiased) estimators built on it.

Along a uniformly random deletion path from a complete grid, a given
n-clue sub-puzzle is met with probability ``P(n) = n! (cells-n)! / cells!``.
A minimal puzzle is output by the controlled-bias generator with
probability proportional to ``P(n)``, so reweighting each n-clue sample
member by ``cf(n) ∝ 1/P(n)`` recovers statistics of the uniform
distribution on minimal puzzles.  All ratios are exact ``Fraction``s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "BiasModel",
    "GroupStats",
    "SampleStats",
    "clue_histogram",
    "correction_factors",
    "path_probability",
    "raw_mean",
    "raw_sd",
    "transition_ratio",
    "unbiased_mean",
    "unbiased_sd",
    "unbiased_total_sd",
]


def transition_ratio(n: int, cells: int) -> Fraction:
    """``P(n+1) / P(n) = (n+1) / (cells-n)``."""
    if not 0 <= n < cells:
        raise ValueError(f"need 0 <= n < {cells}, got {n}")
    return Fraction(n + 1, cells - n)


def path_probability(n: int, cells: int) -> Fraction:
    """Probability that a random deletion order from one complete grid
    passes through a given n-clue sub-puzzle: ``1 / C(cells, n)``."""
    if not 0 <= n <= cells:
        raise ValueError(f"need 0 <= n <= {cells}, got {n}")
    return Fraction(1, math.comb(cells, n))


def correction_factors(n_min: int, n_max: int, anchor: int, cells: int) -> dict[int, Fraction]:
    """``cf(n)`` for ``n_min <= n <= n_max`` with ``cf(anchor) = 1``.

    Built outward from the anchor with ``cf(n+1)/cf(n) = (cells-n)/(n+1)``.
    """
    if not (0 <= n_min <= anchor <= n_max < cells):
        raise ValueError(f"invalid range {n_min}..{n_max} with anchor {anchor} for {cells} cells")
    cf = {anchor: Fraction(1)}
    for n in range(anchor, n_max):
        cf[n + 1] = cf[n] / transition_ratio(n, cells)
    for n in range(anchor - 1, n_min - 1, -1):
        cf[n] = cf[n + 1] * transition_ratio(n, cells)
    return dict(sorted(cf.items()))


@dataclass(frozen=True)
class BiasModel:
    """Correction factors for a board with ``cells`` cells, anchored at ``anchor``."""

    cells: int
    anchor: int

    def cf(self, n: int) -> Fraction:
        return path_probability(self.anchor, self.cells) / path_probability(n, self.cells)

    def cf_float(self, n: int) -> float:
        return float(self.cf(n))

    def ratio(self, n: int) -> Fraction:
        return transition_ratio(n, self.cells)

    def weights(self, ns: Iterable[int]) -> dict[int, float]:
        return {int(n): self.cf_float(int(n)) for n in ns}


@dataclass
class GroupStats:
    """Count, mean and sum of squared deviations of one variable in one bin."""

    on: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @property
    def sd(self) -> float:
        return math.sqrt(self.m2 / self.on) if self.on else float("nan")

    def merge(self, other: "GroupStats") -> "GroupStats":
        if other.on == 0:
            return GroupStats(self.on, self.mean, self.m2)
        if self.on == 0:
            return GroupStats(other.on, other.mean, other.m2)
        on = self.on + other.on
        delta = other.mean - self.mean
        mean = self.mean + delta * other.on / on
        m2 = self.m2 + other.m2 + delta * delta * self.on * other.on / on
        return GroupStats(on, mean, m2)

    @classmethod
    def of(cls, xs: np.ndarray) -> "GroupStats":
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            return cls()
        mu = float(xs.mean())
        return cls(int(xs.size), mu, float(((xs - mu) ** 2).sum()))


@dataclass
class SampleStats:
    """Per-clue-count tallies ``on(n)`` and per-variable ``E(X,n)``, ``sd(X,n)``.

    ``sd`` is the population deviation of the bin (divisor ``on(n)``).
    """

    groups: dict[str, dict[int, GroupStats]] = field(default_factory=dict)
    on: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_arrays(cls, clues: np.ndarray, variables: Mapping[str, np.ndarray]) -> "SampleStats":
        clues = np.asarray(clues, dtype=int)
        ns = np.unique(clues)
        stats = cls(on={int(n): int((clues == n).sum()) for n in ns})
        for name, xs in variables.items():
            xs = np.asarray(xs, dtype=float)
            if xs.shape != clues.shape:
                raise ValueError(f"variable {name!r} has {xs.size} values for {clues.size} puzzles")
            stats.groups[name] = {int(n): GroupStats.of(xs[clues == n]) for n in ns}
        return stats

    def merge(self, other: "SampleStats") -> "SampleStats":
        on = dict(self.on)
        for n, c in other.on.items():
            on[n] = on.get(n, 0) + c
        groups = {}
        for name in set(self.groups) | set(other.groups):
            a, b = self.groups.get(name, {}), other.groups.get(name, {})
            groups[name] = {
                n: a.get(n, GroupStats()).merge(b.get(n, GroupStats())) for n in sorted(set(a) | set(b))
            }
        return SampleStats(groups, dict(sorted(on.items())))

    @property
    def total(self) -> int:
        return sum(self.on.values())

    def E(self, x: str, n: int) -> float:
        return self.groups[x][n].mean

    def sd(self, x: str, n: int) -> float:
        return self.groups[x][n].sd

    def _bins(self, x: str):
        if x not in self.groups:
            raise KeyError(f"untracked variable {x!r}")
        bins = [(n, g) for n, g in self.groups[x].items() if g.on > 0]
        if not bins:
            raise ValueError("empty sample")
        return bins


def _weighted(stats: SampleStats, x: str, weight) -> tuple[float, list]:
    bins = stats._bins(x)
    ws = [(g.on * weight(n), n, g) for n, g in bins]
    total = sum(w for w, _, _ in ws)
    return total, ws


def unbiased_mean(stats: SampleStats, x: str, model: BiasModel) -> float:
    """``sum E(X,n) on(n) cf(n) / sum on(n) cf(n)``."""
    total, ws = _weighted(stats, x, model.cf_float)
    return sum(w * g.mean for w, _, g in ws) / total


def unbiased_sd(stats: SampleStats, x: str, model: BiasModel) -> float:
    """``sqrt(sum sd(X,n)^2 on(n) cf(n) / sum on(n) cf(n))``: the pooled
    within-bin deviation, without the between-bin term."""
    total, ws = _weighted(stats, x, model.cf_float)
    return math.sqrt(sum(w * g.sd**2 for w, _, g in ws) / total)


def unbiased_total_sd(stats: SampleStats, x: str, model: BiasModel) -> float:
    """Reweighted deviation including the spread of the bin means."""
    mu = unbiased_mean(stats, x, model)
    total, ws = _weighted(stats, x, model.cf_float)
    return math.sqrt(sum(w * (g.sd**2 + (g.mean - mu) ** 2) for w, _, g in ws) / total)


def raw_mean(stats: SampleStats, x: str) -> float:
    total, ws = _weighted(stats, x, lambda n: 1.0)
    return sum(w * g.mean for w, _, g in ws) / total


def raw_sd(stats: SampleStats, x: str) -> float:
    """Plain deviation of the whole sample (divisor = sample size)."""
    mu = raw_mean(stats, x)
    total, ws = _weighted(stats, x, lambda n: 1.0)
    return math.sqrt(sum(w * (g.sd**2 + (g.mean - mu) ** 2) for w, _, g in ws) / total)


def clue_histogram(clue_counts: Iterable[int]) -> tuple[dict[int, int], dict[int, float]]:
    """``on(n)`` and the same table in percent."""
    counts: dict[int, int] = {}
    for n in clue_counts:
        counts[int(n)] = counts.get(int(n), 0) + 1
    counts = dict(sorted(counts.items()))
    total = sum(counts.values())
    pct = {n: 100.0 * c / total for n, c in counts.items()} if total else {}
    return counts, pct
