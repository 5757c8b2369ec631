"""Finite-resolution grid measures and minimal interval-partition costs.

The grid is the N+1 points {0, 1/N, .., 1}; an internal set is a disjoint
union of index runs.  A delta-interval is a contiguous index block whose
diameter counts points, (j - i + 1)/N, following the convention the
partition arithmetic is built on even though the metric diameter of the
point set is (j - i)/N; this shifts costs by O(1/N) and makes the s = 1
cost of a set exactly card/N.

The minimal-cost partition into delta-intervals is computed greedily: a
run of L points splits into floor(L/D) full intervals of D = floor(delta*N)
points plus one remainder.  For 0 < s <= 1 the cost t -> t**s is concave,
so the sum over a partition with the fewest, most unequal parts is minimal
(Schur concavity; merging parts never increases the cost by
subadditivity).  An exact dynamic program over each run is provided as the
independent oracle for that claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InfeasibleDeltaError, InputError


@dataclass(frozen=True)
class HyperGrid:
    """The grid {0, 1/N, .., N/N}."""

    N: int

    def __post_init__(self):
        if self.N < 2:
            raise InputError("grid resolution N must be >= 2")


@dataclass(frozen=True)
class InternalSet:
    """Sorted, separated index runs [i, j]; runs never touch or overlap."""

    runs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.runs:
            if not 0 <= i <= j:
                raise InputError(f"bad run [{i}, {j}]")
        for (_, j1), (i2, _) in zip(self.runs, self.runs[1:]):
            if i2 <= j1 + 1:
                raise InputError("runs must be sorted with a gap of at least one index")

    @property
    def card(self) -> int:
        return sum(j - i + 1 for i, j in self.runs)

    def validate_on(self, grid: HyperGrid) -> None:
        if self.runs and self.runs[-1][1] > grid.N:
            raise InputError(f"run end {self.runs[-1][1]} exceeds grid index {grid.N}")


def merge_runs(pairs: Sequence[tuple[int, int]]) -> InternalSet:
    """Normalize arbitrary index pairs into an InternalSet (merge touching runs)."""
    cleaned = sorted((min(i, j), max(i, j)) for i, j in pairs)
    merged: list[tuple[int, int]] = []
    for i, j in cleaned:
        if merged and i <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], j))
        else:
            merged.append((i, j))
    return InternalSet(tuple(merged))


@dataclass(frozen=True)
class DeltaPartition:
    """A partition of an internal set into intervals of diameter <= delta."""

    intervals: tuple[tuple[int, int], ...]
    delta: Fraction
    cost: float


# ---------------------------------------------------------------------------
# discrete Lebesgue measure


def discrete_lebesgue(B: InternalSet, grid: HyperGrid) -> Fraction:
    """card(B)/(N+1): the uniform probability of the grid trace."""
    B.validate_on(grid)
    return Fraction(B.card, grid.N + 1)


def _merge_intervals(intervals) -> list[tuple[Fraction, Fraction]]:
    pairs = sorted((Fraction(a), Fraction(b)) for a, b in intervals)
    for a, b in pairs:
        if not 0 <= a <= b <= 1:
            raise InputError("intervals must satisfy 0 <= a <= b <= 1")
    merged: list[tuple[Fraction, Fraction]] = []
    for a, b in pairs:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def lebesgue_bounds(intervals, grid: HyperGrid) -> tuple[Fraction, Fraction]:
    """Inner/outer grid measure of a finite union of closed intervals.

    Inner counts grid points lying in the set; outer counts the cells
    [i/N, (i+1)/N) the set meets, the least index family whose cells cover
    it.  Both converge to the length as N grows, with gap at most
    2*(number of intervals)/(N+1).
    """
    merged = _merge_intervals(intervals)
    if not merged:
        return (Fraction(0), Fraction(0))
    N = grid.N
    inner = outer = 0
    for a, b in merged:
        lo_in = math.ceil(a * N)
        hi_in = math.floor(b * N)
        if lo_in <= hi_in:
            inner += hi_in - lo_in + 1
        # cell i meets [a, b] iff i <= b*N and i + 1 > a*N
        lo_out = a * N if (a * N).denominator == 1 else math.floor(a * N)
        hi_out = min(math.floor(b * N), N)
        outer += hi_out - int(lo_out) + 1
    return (Fraction(inner, N + 1), Fraction(outer, N + 1))


# ---------------------------------------------------------------------------
# minimal delta-interval partition


def _capacity(delta: Fraction, grid: HyperGrid) -> int:
    """Max points per interval: diameter (j-i+1)/N <= delta means counts <= delta*N."""
    D = math.floor(Fraction(delta) * grid.N)
    if D < 1:
        raise InfeasibleDeltaError(f"delta={delta} admits no interval on N={grid.N}")
    return D


def _partition_cost(lengths: Sequence[int], s, N: int) -> float:
    """Canonical cost of a partition given its interval point counts.

    All callers funnel through this one function (lengths sorted, fsum) so
    that equal partitions cost bit-identically regardless of how they were
    found; s = 1 takes an exact rational path, making the cost exactly
    card/N.
    """
    if s == 1:
        return float(Fraction(sum(lengths), N))
    s = float(s)
    return math.fsum((c / N) ** s for c in sorted(lengths, reverse=True))


def h_delta_s_greedy(
    B: InternalSet, delta, s, grid: HyperGrid
) -> DeltaPartition:
    """Minimal-cost partition of B into delta-intervals (greedy, provably optimal)."""
    _check_s(s)
    delta = Fraction(delta)
    B.validate_on(grid)
    D = _capacity(delta, grid)
    intervals: list[tuple[int, int]] = []
    for i, j in B.runs:
        length = j - i + 1
        q, r = divmod(length, D)
        pos = i
        for _ in range(q):
            intervals.append((pos, pos + D - 1))
            pos += D
        if r:
            intervals.append((pos, j))
    cost = _partition_cost([b - a + 1 for a, b in intervals], s, grid.N)
    return DeltaPartition(tuple(intervals), delta, cost)


def h_delta_s_dp(B: InternalSet, delta, s, grid: HyperGrid) -> DeltaPartition:
    """Exact minimum by dynamic programming over each run, O(L*D) per run.

    Serves as the brute-force oracle for the greedy construction; both
    report costs through the same canonical arithmetic.
    """
    _check_s(s)
    delta = Fraction(delta)
    B.validate_on(grid)
    D = _capacity(delta, grid)
    N = grid.N
    sf = float(s)
    intervals: list[tuple[int, int]] = []
    for i, j in B.runs:
        length = j - i + 1
        # dp[t] = minimal cost of partitioning the first t points of the run
        dp = [0.0] * (length + 1)
        choice = [0] * (length + 1)
        for t in range(1, length + 1):
            best, best_c = math.inf, 0
            for c in range(min(D, t), 0, -1):
                cand = dp[t - c] + (c / N) ** sf
                if cand < best:
                    best, best_c = cand, c
            dp[t] = best
            choice[t] = best_c
        parts = []
        t = length
        while t > 0:
            parts.append(choice[t])
            t -= choice[t]
        parts.reverse()
        pos = i
        for c in parts:
            intervals.append((pos, pos + c - 1))
            pos += c
    cost = _partition_cost([b - a + 1 for a, b in intervals], s, grid.N)
    return DeltaPartition(tuple(intervals), delta, cost)


def _check_s(s) -> None:
    if not 0 < s <= 1:
        raise InputError("s must lie in (0, 1]")


# ---------------------------------------------------------------------------
# outer measure over real subsets of [0, 1]


def cantor_stage(m: int) -> list[tuple[Fraction, Fraction]]:
    """The 2**m closed middle-thirds intervals of stage m."""
    if m < 0:
        raise InputError("stage must be >= 0")
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(m):
        nxt = []
        for a, b in intervals:
            third = (b - a) / 3
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        intervals = nxt
    return intervals


def trace_superset(intervals, grid: HyperGrid, enlarge: int = 1) -> InternalSet:
    """Smallest internal superset of the grid trace, widened per component end.

    Each merged component [a, b] traces to indices ceil(a*N)..floor(b*N);
    the runs are then extended by ``enlarge`` indices on each side (clamped
    to the grid), mirroring the covering step that swallows points
    infinitesimally close to the set at finite resolution.
    """
    merged = _merge_intervals(intervals)
    N = grid.N
    runs = []
    for a, b in merged:
        lo = math.ceil(a * N)
        hi = math.floor(b * N)
        if lo > hi:
            continue  # component too thin to trace at this resolution
        runs.append((max(0, lo - enlarge), min(N, hi + enlarge)))
    return merge_runs(runs)


def outer_h_measure(
    region, s, deltas: Sequence, grid: HyperGrid
) -> list[tuple[Fraction, float]]:
    """Partition costs of the enlarged grid trace of ``region`` per delta.

    ``region`` is a list of closed-interval endpoint pairs (see
    :func:`cantor_stage` for the middle-thirds stages).  Deltas must be
    decreasing and feasible on the grid.
    """
    _check_s(s)
    ds = [Fraction(d) for d in deltas]
    if not ds:
        raise InputError("need at least one delta")
    if any(b >= a for a, b in zip(ds, ds[1:])):
        raise InputError("deltas must be strictly decreasing")
    B = trace_superset(region, grid)
    out = []
    for d in ds:
        part = h_delta_s_greedy(B, d, s, grid)
        out.append((d, part.cost))
    return out


# ---------------------------------------------------------------------------
# wire formats


def internal_set_to_json(B: InternalSet, grid: HyperGrid) -> dict:
    return {"N": grid.N, "runs": [[i, j] for i, j in B.runs]}


def internal_set_from_json(obj: dict) -> tuple[HyperGrid, InternalSet]:
    if not isinstance(obj, dict):
        raise InputError("internal set must be a JSON object")
    unknown = set(obj) - {"N", "runs"}
    if unknown:
        raise InputError(f"unknown keys in internal set: {sorted(unknown)}")
    if "N" not in obj or "runs" not in obj:
        raise InputError("internal set needs N and runs")
    N = obj["N"]
    if not isinstance(N, int) or isinstance(N, bool):
        raise InputError("N must be an integer")
    runs = obj["runs"]
    if not isinstance(runs, list) or not all(
        isinstance(r, list) and len(r) == 2 and all(isinstance(x, int) for x in r)
        for r in runs
    ):
        raise InputError("runs must be a list of [i, j] integer pairs")
    grid = HyperGrid(N)
    iset = InternalSet(tuple((i, j) for i, j in runs))
    iset.validate_on(grid)
    return grid, iset


def measure_table_csv(rows: list[tuple[Fraction, float]], precision: int = 12) -> str:
    lines = ["delta,cost"]
    for d, cost in rows:
        lines.append(f"{d.numerator}/{d.denominator},{cost:.{precision}f}")
    return "\n".join(lines) + "\n"
