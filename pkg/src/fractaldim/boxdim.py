"""Grid-based box-counting estimators over abstract cell sources.

Conventions: cells are half-open axis-aligned boxes [i*beta**-m,
(i+1)*beta**-m) per coordinate, and the grid over the unit domain has
exactly beta**m cells per axis, so a full interval [0, 1] counts beta**m
cells (the point 1 is attributed to the last cell).  Scale ratios and cell
counts are kept exact; logarithms appear only in the final slope or
exponent arithmetic, and common integer powers are cancelled exactly first
so that aligned grids over a piece/scale rule return the rule's dimension
bit-for-bit.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BudgetExceededError, DegenerateGridError, InputError

DIVERGES = "diverges"
VANISHES = "vanishes"
BOUNDED = "bounded"


class CellSource(ABC):
    """Counting interface: how many radix-``base`` level-m cells meet the set."""

    base: int
    ambient_dim: int

    @abstractmethod
    def count(self, m: int) -> int:
        """Exact number of level-m cells meeting the set."""

    def enumerate_cells(self, m: int) -> Iterator[tuple[int, ...]]:
        raise NotImplementedError(f"{type(self).__name__} does not enumerate cells")


@dataclass(frozen=True)
class CountEntry:
    m: int
    delta: Fraction
    n_cells: int


@dataclass(frozen=True)
class CountSeries:
    """Pairs of grid scale and exact cover count, strictly increasing in level."""

    entries: tuple[CountEntry, ...]
    base: int | None = None
    ambient_dim: int | None = None

    def __post_init__(self):
        if not self.entries:
            raise InputError("count series must be nonempty")
        levels = [e.m for e in self.entries]
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise InputError("levels must be strictly increasing")
        if any(e.n_cells < 0 for e in self.entries):
            raise InputError("cell counts must be >= 0")


@dataclass(frozen=True)
class TwoGridResult:
    h: Fraction
    k: Fraction
    n_h: int
    n_k: int
    d: float


@dataclass(frozen=True)
class CriticalExponent:
    """Root of the dot-count scaling test, with its final bisection bracket."""

    d: float
    lo: float
    hi: float
    degenerate: bool = False


@dataclass(frozen=True)
class ClosureCheckReport:
    equal: bool
    sample_cells: int
    reference_cells: int
    precondition_failed: bool = False


# ---------------------------------------------------------------------------
# sources


class IntervalSource(CellSource):
    """A closed interval [a, b] inside [0, 1] with rational endpoints."""

    def __init__(self, a, b, base: int = 2):
        a, b = Fraction(a), Fraction(b)
        if not 0 <= a <= b <= 1:
            raise InputError("need 0 <= a <= b <= 1")
        self.a, self.b = a, b
        self.base = base
        self.ambient_dim = 1

    def count(self, m: int) -> int:
        scale = self.base**m
        lo = min(math.floor(self.a * scale), scale - 1)
        hi = min(math.floor(self.b * scale), scale - 1)
        return hi - lo + 1


class EmptySource(CellSource):
    def __init__(self, base: int = 2, ambient_dim: int = 1):
        self.base = base
        self.ambient_dim = ambient_dim

    def count(self, m: int) -> int:
        return 0


class RuleSource(CellSource):
    """Arithmetic cell counts pieces**m at scale**-m for a piece/scale rule."""

    def __init__(self, rule):
        self.rule = rule
        self.base = rule.scale
        self.ambient_dim = rule.ambient_dim

    def count(self, m: int) -> int:
        return self.rule.pieces**m


class ExplicitSource(CellSource):
    """Counts read from a fixed mapping; handy for synthetic series."""

    def __init__(self, counts: Mapping[int, int], base: int = 2, ambient_dim: int = 1):
        self.counts = dict(counts)
        self.base = base
        self.ambient_dim = ambient_dim

    def count(self, m: int) -> int:
        try:
            return self.counts[m]
        except KeyError:
            raise InputError(f"no count recorded for level {m}") from None


# ---------------------------------------------------------------------------
# series construction and slopes


def count_series(
    source: CellSource, levels: Sequence[int], cell_budget: int | None = None
) -> CountSeries:
    """Exact (delta, count) pairs for the given strictly increasing levels."""
    if not levels:
        raise InputError("levels must be nonempty")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise InputError("levels must be strictly increasing")
    entries = []
    for m in levels:
        n = source.count(m)
        if cell_budget is not None and n > cell_budget:
            raise BudgetExceededError(
                f"level {m} needs {n} cells, over the budget of {cell_budget}", level=m
            )
        entries.append(CountEntry(m=m, delta=Fraction(1, source.base**m), n_cells=n))
    return CountSeries(tuple(entries), base=source.base, ambient_dim=source.ambient_dim)


def _log_scale(delta: Fraction) -> float:
    """log(1/delta), safe for huge exact rationals."""
    return math.log(delta.denominator) - math.log(delta.numerator)


def _entry_slope(entry: CountEntry) -> float:
    if entry.n_cells <= 1:
        return 0.0
    return math.log(entry.n_cells) / _log_scale(entry.delta)


def slope_dim(series: CountSeries, tail: int) -> tuple[float, float]:
    """Min/max of log(count)/log(1/delta) over the last ``tail`` entries."""
    if tail < 2 or len(series.entries) < tail:
        raise InputError("need series length >= tail >= 2")
    window = series.entries[-tail:]
    if all(e.n_cells <= 1 for e in window):
        return (0.0, 0.0)
    slopes = [_entry_slope(e) for e in window]
    return (min(slopes), max(slopes))


# ---------------------------------------------------------------------------
# two-grid dimension


def _iroot(n: int, k: int) -> int:
    """Floor of the integer k-th root (Newton iteration on exact ints)."""
    if n < 0 or k < 1:
        raise InputError("iroot needs n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _primitive_power(n: int) -> tuple[int, int]:
    """Write n >= 2 as base**exp with maximal exp (base not a perfect power)."""
    for e in range(n.bit_length() - 1, 1, -1):
        r = _iroot(n, e)
        if r**e == n:
            return r, e
    return n, 1


def _reduced_log_ratio(num: Fraction, den: Fraction) -> float:
    """log(num)/log(den) with common integer exponents cancelled exactly."""

    def decompose(f: Fraction) -> tuple[Fraction, int]:
        p, q = f.numerator, f.denominator
        bp, ep = _primitive_power(p) if p > 1 else (p, 0)
        bq, eq = _primitive_power(q) if q > 1 else (q, 0)
        if ep and eq:
            g = math.gcd(ep, eq)
        else:
            g = ep or eq
        if g == 0:
            return Fraction(1), 1
        return Fraction(bp ** (ep // g), bq ** (eq // g)), g

    base_n, exp_n = decompose(num)
    base_d, exp_d = decompose(den)
    g = math.gcd(exp_n, exp_d)
    top = base_n ** (exp_n // g)
    bottom = base_d ** (exp_d // g)
    return _log_fraction(top) / _log_fraction(bottom)


def _log_fraction(f: Fraction) -> float:
    return math.log(f.numerator) - math.log(f.denominator)


def two_grid_dim(n_h: int, n_k: int, h, k) -> TwoGridResult:
    """Dimension from cell counts at two scales: log(n_h/n_k) / log(k/h)."""
    h, k = Fraction(h), Fraction(k)
    if h == k:
        raise DegenerateGridError("two-grid comparison needs h != k")
    if not 0 < h < k < 1:
        raise InputError("need 0 < h < k < 1")
    if not n_h >= n_k >= 1:
        raise InputError("need n_h >= n_k >= 1")
    ratio = Fraction(n_h, n_k)
    if ratio == 1:
        return TwoGridResult(h=h, k=k, n_h=n_h, n_k=n_k, d=0.0)
    d = _reduced_log_ratio(ratio, k / h)
    return TwoGridResult(h=h, k=k, n_h=n_h, n_k=n_k, d=d)


# ---------------------------------------------------------------------------
# dot-counting critical exponent


def _g_values(entries, d: float) -> list[float]:
    # g(m) = log(count) - d*log(1/delta): increasing means count*delta**d blows up
    out = []
    for e in entries:
        if e.n_cells < 1:
            raise InputError("classification needs counts >= 1")
        out.append(math.log(e.n_cells) - d * _log_scale(e.delta))
    return out


def classify_d(series: CountSeries, d: float, tail: int | None = None) -> str:
    """Trend of count * delta**d over the series tail: diverges, vanishes, bounded.

    Early levels can carry transients (union counts, offsets) that mask the
    exponent, so by default the first third of the entries is dropped.  A
    per-step tolerance absorbs float rounding so that series sitting exactly
    at their critical exponent classify as bounded.
    """
    if len(series.entries) < 3:
        raise InputError("classification needs at least 3 entries")
    if tail is None:
        tail = max(3, len(series.entries) - len(series.entries) // 3)
    if tail < 3 or tail > len(series.entries):
        raise InputError("need 3 <= tail <= series length")
    g = _g_values(series.entries[-tail:], d)
    tol = 1e-12 * max(1.0, max(abs(v) for v in g))
    diffs = [b - a for a, b in zip(g, g[1:])]
    if all(x > tol for x in diffs):
        return DIVERGES
    if all(x < -tol for x in diffs):
        return VANISHES
    return BOUNDED


def critical_d(
    series: CountSeries, tol: float, d_max: float | None = None
) -> CriticalExponent:
    """Bisect for the exponent separating divergence from vanishing.

    Counts must grow strictly; otherwise the slope value is returned with
    the ``degenerate`` flag set.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    counts = [e.n_cells for e in series.entries]
    if len(counts) < 3:
        raise InputError("critical exponent needs at least 3 entries")
    if any(b <= a for a, b in zip(counts, counts[1:])):
        lower, _ = slope_dim(series, len(series.entries))
        return CriticalExponent(d=lower, lo=lower, hi=lower, degenerate=True)
    if d_max is None:
        if series.ambient_dim is not None:
            d_max = float(series.ambient_dim)
        else:
            steps = [
                _log_fraction(Fraction(b.n_cells, a.n_cells))
                / (_log_scale(b.delta) - _log_scale(a.delta))
                for a, b in zip(series.entries, series.entries[1:])
            ]
            d_max = max(steps) + 1.0
    lo, hi = 0.0, float(d_max)
    if classify_d(series, hi) == DIVERGES:
        raise InputError(f"series still diverges at d_max={d_max}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        verdict = classify_d(series, mid)
        if verdict == DIVERGES:
            lo = mid
        elif verdict == VANISHES:
            hi = mid
        else:
            return CriticalExponent(d=mid, lo=mid, hi=mid)
    return CriticalExponent(d=0.5 * (lo + hi), lo=lo, hi=hi)


# ---------------------------------------------------------------------------
# closure / dense-sample counting


def occupied_cells(points: Iterable, base: int, m: int, ambient_dim: int = 1) -> set:
    """Distinct level-m cell indices hit by the points.

    Points are scalars (ambient 1) or coordinate tuples; exact rationals are
    preferred since floats inherit their rounding at cell boundaries.  The
    point 1 is attributed to the last cell of the unit grid.
    """
    scale = base**m
    cells = set()
    for p in points:
        coords = p if isinstance(p, (tuple, list)) else (p,)
        if len(coords) != ambient_dim:
            raise InputError(f"point {p!r} has wrong arity for ambient {ambient_dim}")
        idx = []
        for x in coords:
            i = math.floor(Fraction(x) * scale)
            idx.append(min(max(i, 0), scale - 1))
        cells.add(tuple(idx))
    return cells


def closure_count_check(
    dense_sample: Iterable,
    reference: CellSource,
    m: int,
    verify_density: bool = False,
) -> ClosureCheckReport:
    """Compare the cell count of a point sample against a reference source.

    With ``verify_density`` the reference must enumerate its cells, and a
    sample missing any reference cell reports a failed precondition instead
    of a plain inequality.
    """
    sample_cells = occupied_cells(dense_sample, reference.base, m, reference.ambient_dim)
    ref_count = reference.count(m)
    if verify_density:
        ref_cells = set(reference.enumerate_cells(m))
        missing = ref_cells - sample_cells
        if missing:
            return ClosureCheckReport(
                equal=False,
                sample_cells=len(sample_cells),
                reference_cells=ref_count,
                precondition_failed=True,
            )
    return ClosureCheckReport(
        equal=len(sample_cells) == ref_count,
        sample_cells=len(sample_cells),
        reference_cells=ref_count,
    )


# ---------------------------------------------------------------------------
# wire formats


def count_series_to_csv(series: CountSeries) -> str:
    lines = ["m,delta,n_cells"]
    for e in series.entries:
        lines.append(f"{e.m},{e.delta.numerator}/{e.delta.denominator},{e.n_cells}")
    return "\n".join(lines) + "\n"


def count_series_from_csv(
    text: str, base: int | None = None, ambient_dim: int | None = None
) -> CountSeries:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != "m,delta,n_cells":
        raise InputError("count series CSV must start with header m,delta,n_cells")
    entries = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise InputError(f"bad count series row: {ln!r}")
        m = int(parts[0])
        num, _, den = parts[1].partition("/")
        delta = Fraction(int(num), int(den or "1"))
        entries.append(CountEntry(m=m, delta=delta, n_cells=int(parts[2])))
    return CountSeries(tuple(entries), base=base, ambient_dim=ambient_dim)


def two_grid_result_to_json(result: TwoGridResult, precision: int = 12) -> dict:
    return {
        "h": f"{result.h.numerator}/{result.h.denominator}",
        "k": f"{result.k.numerator}/{result.k.denominator}",
        "n_h": result.n_h,
        "n_k": result.n_k,
        "d": round(result.d, precision),
    }
