"""Exact analysis of digit-block sets.

A digit-block set consists of the reals in [0, 1] whose base-``beta``
expansion alternates blocks of forced zeros (lengths from the ``zeros``
sequence) with blocks of free digits drawn from {0, .., sigma-1} (lengths
from ``frees``).  Level-m grid cells are half-open [i*beta**-m,
(i+1)*beta**-m); a cell meets the set exactly when its m-digit prefix
respects every forced zero, so cover counts are the exact integers
sigma**X(m) with X(m) the number of free positions among the first m digits.

Dimensions are reported as exact rationals X/m whenever sigma == beta;
floats appear only at the reporting boundary.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import seqgen
from .boxdim import CellSource
from .errors import (
    BudgetExceededError,
    HorizonExceededError,
    InputError,
    OutOfRangeError,
)
from .seqgen import SequenceSpec

AFTER_ZEROS = "after_zeros"
AFTER_FREES = "after_frees"
FORCED_ZERO = "forced_zero"
FREE = "free"

DEFAULT_M_CAP = 10_000_000

#: trend labels for the H^s coefficient estimate
DIVERGING = "diverging"
VANISHING = "vanishing"
STABLE = "stable"


@dataclass(frozen=True)
class BlockSchedule:
    """Radix, alphabet and the two block-length sequences of a digit-block set."""

    base: int
    alphabet: int
    zeros: SequenceSpec
    frees: SequenceSpec | None = None
    m_cap: int = DEFAULT_M_CAP

    def __post_init__(self):
        if self.base < 2:
            raise InputError("base must be >= 2")
        if not 2 <= self.alphabet <= self.base:
            raise InputError("alphabet must satisfy 2 <= alphabet <= base")
        if self.m_cap < 1:
            raise InputError("m_cap must be >= 1")
        if self.frees is None:
            object.__setattr__(self, "frees", self.zeros)

    @property
    def horizon(self) -> int:
        return min(self.zeros.horizon, self.frees.horizon)


@dataclass(frozen=True)
class CutPoint:
    """A digit position ending a zero block or a free block."""

    n: int
    kind: str
    m: int
    x_count: int


@dataclass(frozen=True)
class DimReport:
    """Cut-family dimension samples and their tail values.

    ``lower`` is the tail value along the after-zeros cuts, ``upper`` the
    tail along the after-frees cuts.  Coverings cut after a zero block are
    the efficient ones, so the lower family is what gets reported as the
    Hausdorff dimension.  Values are exact Fractions when alphabet == base.
    ``converged`` holds when the last two samples of each family differ by
    less than the requested tolerance; ``spread`` is the larger of the two
    achieved gaps.
    """

    lower_samples: tuple[tuple[int, int, int, object], ...]  # (n, m, x_count, value)
    upper_samples: tuple[tuple[int, int, int, object], ...]
    lower: object
    upper: object
    converged: bool
    spread: float
    n_used: int

    @property
    def samples(self) -> list[tuple[int, object]]:
        """All (m, local_dim) samples from both families, ordered by m."""
        merged = [(m, v) for (_, m, _, v) in self.lower_samples]
        merged += [(m, v) for (_, m, _, v) in self.upper_samples]
        return sorted(merged, key=lambda pair: pair[0])


@dataclass(frozen=True)
class HsEstimate:
    """Tail value of sigma**X(m) * beta**(-m*s) along the after-zeros cuts."""

    value: float
    trend: str
    log_values: tuple[Fraction, ...] = field(repr=False, default=())


# ---------------------------------------------------------------------------
# block walks


def _block_iter(schedule: BlockSchedule) -> Iterator[tuple[str, int]]:
    """Alternating (role, length) blocks, horizon-guarded."""
    zit = seqgen._iter_terms(schedule.zeros)
    fit = seqgen._iter_terms(schedule.frees)
    for n in range(schedule.horizon + 1):
        yield FORCED_ZERO, next(zit)
        yield FREE, next(fit)
    raise HorizonExceededError(
        f"digit position walk ran past horizon {schedule.horizon}",
        index=schedule.horizon,
    )


def digit_role(schedule: BlockSchedule, m: int) -> str:
    """Role of 1-indexed digit position ``m``: forced zero or free."""
    if m < 1 or m > schedule.m_cap:
        raise OutOfRangeError(f"digit position {m} outside [1, {schedule.m_cap}]")
    pos = 0
    for role, length in _block_iter(schedule):
        pos += length
        if m <= pos:
            return role
    raise AssertionError("unreachable")


def x_count(schedule: BlockSchedule, m: int) -> int:
    """Number of free digit positions among the first ``m``."""
    if m < 0 or m > schedule.m_cap:
        raise OutOfRangeError(f"digit position {m} outside [0, {schedule.m_cap}]")
    if m == 0:
        return 0
    pos = free = 0
    for role, length in _block_iter(schedule):
        take = min(length, m - pos)
        if role == FREE:
            free += take
        pos += take
        if pos >= m:
            return free
    raise AssertionError("unreachable")


def cut_points(schedule: BlockSchedule, n_max: int) -> list[CutPoint]:
    """Both cut families for block indices 0..n_max, ordered by position."""
    if n_max < 0:
        raise InputError("n_max must be >= 0")
    za = seqgen.terms(schedule.zeros, n_max + 1)
    fb = seqgen.terms(schedule.frees, n_max + 1)
    out = []
    sum_zeros = sum_frees = 0
    for n in range(n_max + 1):
        sum_zeros += za[n]
        out.append(CutPoint(n, AFTER_ZEROS, sum_zeros + sum_frees, sum_frees))
        sum_frees += fb[n]
        out.append(CutPoint(n, AFTER_FREES, sum_zeros + sum_frees, sum_frees))
    return out


# ---------------------------------------------------------------------------
# counting and dimension


def cover_count(schedule: BlockSchedule, m: int) -> int:
    """Number of level-m cells meeting the set: sigma**X(m); X(0) = 0 gives 1."""
    return schedule.alphabet ** x_count(schedule, m)


def local_dim(schedule: BlockSchedule, m: int):
    """Scale-m dimension sample X(m)*log(sigma) / (m*log(beta)).

    Exact Fraction X/m when alphabet == base, else a float.
    """
    if m < 1:
        raise OutOfRangeError("local dimension needs m >= 1")
    ratio = Fraction(x_count(schedule, m), m)
    if schedule.alphabet == schedule.base:
        return ratio
    return float(ratio) * (math.log(schedule.alphabet) / math.log(schedule.base))


def _cut_value(schedule: BlockSchedule, cut: CutPoint):
    ratio = Fraction(cut.x_count, cut.m)
    if schedule.alphabet == schedule.base:
        return ratio
    return float(ratio) * (math.log(schedule.alphabet) / math.log(schedule.base))


def dim_bounds(schedule: BlockSchedule, n_max: int, tol: float = 1e-6) -> DimReport:
    """Lower/upper dimension from the two cut families through block n_max.

    The tail value is the last computed sample; no extrapolation is applied.
    If the horizon or digit cap runs out first, the report uses whatever cuts
    exist and ``converged`` is False.
    """
    if n_max < 2:
        raise InputError("dim_bounds needs n_max >= 2")
    cuts: list[CutPoint] = []
    truncated = False
    try:
        cuts = cut_points(schedule, min(n_max, schedule.horizon))
        truncated = n_max > schedule.horizon
    except HorizonExceededError as exc:
        # digit cap hit mid-walk; retry with what fits
        usable = (exc.index or 1) - 1
        if usable < 0:
            raise
        cuts = cut_points(schedule, usable)
        truncated = True
    lower = tuple(
        (c.n, c.m, c.x_count, _cut_value(schedule, c)) for c in cuts if c.kind == AFTER_ZEROS
    )
    upper = tuple(
        (c.n, c.m, c.x_count, _cut_value(schedule, c)) for c in cuts if c.kind == AFTER_FREES
    )
    if not lower or not upper:
        raise InputError("schedule yields no usable cut samples")

    def gap(samples):
        if len(samples) < 2:
            return math.inf
        return abs(float(samples[-1][3]) - float(samples[-2][3]))

    spread = max(gap(lower), gap(upper))
    converged = not truncated and spread < tol
    return DimReport(
        lower_samples=lower,
        upper_samples=upper,
        lower=lower[-1][3],
        upper=upper[-1][3],
        converged=converged,
        spread=spread,
        n_used=cuts[-1].n,
    )


def hausdorff_dim(schedule: BlockSchedule, n_max: int, tol: float = 1e-6):
    """Tail value along the after-zeros cuts, reported as the Hausdorff dimension.

    The after-zeros scales are where the efficient covers of a digit-block
    set live; both cut families remain available through dim_bounds.
    """
    return dim_bounds(schedule, n_max, tol).lower


def hs_measure_estimate(schedule: BlockSchedule, s, n_max: int) -> HsEstimate:
    """Tail of sigma**X(m) * beta**(-m*s) along the after-zeros cuts.

    ``s`` may be a float or a Fraction; pass a Fraction when the exponent is
    expected to cancel exactly (the trend is then judged without noise).
    The value is the last sample, clamped to 0.0 / inf when its exponent
    leaves the floating-point range.
    """
    s = Fraction(s)
    if not 0 < s <= 1:
        raise InputError("s must lie in (0, 1]")
    cuts = [c for c in cut_points(schedule, n_max) if c.kind == AFTER_ZEROS]
    ln_sigma = Fraction(math.log(schedule.alphabet))
    ln_beta = Fraction(math.log(schedule.base))
    logs = tuple(c.x_count * ln_sigma - s * c.m * ln_beta for c in cuts)
    tail = logs[-1]
    diffs = [b - a for a, b in zip(logs[-4:], logs[-4:][1:])]
    flat = Fraction(1e-9) * (1 + abs(tail))
    if diffs and all(d > flat for d in diffs):
        trend = DIVERGING
    elif diffs and all(d < -flat for d in diffs):
        trend = VANISHING
    else:
        trend = STABLE
    return HsEstimate(value=_exp_guarded(tail), trend=trend, log_values=logs)


def _exp_guarded(t: Fraction) -> float:
    if t < -750:
        return 0.0
    if t > 709:
        return math.inf
    return math.exp(float(t))


# ---------------------------------------------------------------------------
# points and cells


def sample_points(
    schedule: BlockSchedule, count: int, m_digits: int, seed: int
) -> list[Fraction]:
    """Random m-digit truncations of set elements, deterministic per seed."""
    if count < 0:
        raise InputError("count must be >= 0")
    if m_digits < 0 or m_digits > schedule.m_cap:
        raise OutOfRangeError(f"m_digits outside [0, {schedule.m_cap}]")
    pattern = _role_pattern(schedule, m_digits)
    rng = random.Random(seed)
    beta, sigma = schedule.base, schedule.alphabet
    denom = beta**m_digits
    points = []
    for _ in range(count):
        value = 0
        for role in pattern:
            value *= beta
            if role == FREE:
                value += rng.randrange(sigma)
        points.append(Fraction(value, denom))
    return points


def _role_pattern(schedule: BlockSchedule, m_digits: int) -> list[str]:
    pattern: list[str] = []
    for role, length in _block_iter(schedule):
        take = min(length, m_digits - len(pattern))
        pattern.extend([role] * take)
        if len(pattern) >= m_digits:
            return pattern
    return pattern


class BlockCellSource(CellSource):
    """Level-m cell counting adapter for a digit-block set."""

    def __init__(self, schedule: BlockSchedule, cell_budget: int = 10**8):
        self.schedule = schedule
        self.base = schedule.base
        self.ambient_dim = 1
        self.cell_budget = cell_budget

    def count(self, m: int) -> int:
        return cover_count(self.schedule, m)

    def enumerate_cells(self, m: int) -> Iterator[tuple[int]]:
        """All admissible m-digit prefixes as cell indices, ascending."""
        total = self.count(m)
        if total > self.cell_budget:
            raise BudgetExceededError(
                f"level {m} needs {total} cells, over the budget of {self.cell_budget}",
                level=m,
            )
        pattern = _role_pattern(self.schedule, m)
        beta, sigma = self.schedule.base, self.schedule.alphabet

        def rec(prefix: int, k: int) -> Iterator[tuple[int]]:
            if k == len(pattern):
                yield (prefix,)
                return
            if pattern[k] == FREE:
                for d in range(sigma):
                    yield from rec(prefix * beta + d, k + 1)
            else:
                yield from rec(prefix * beta, k + 1)

        yield from rec(0, 0)


def cell_source(schedule: BlockSchedule, cell_budget: int = 10**8) -> BlockCellSource:
    return BlockCellSource(schedule, cell_budget)


# ---------------------------------------------------------------------------
# wire formats


def _format_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(v)


def dim_report_csv(report: DimReport, precision: int = 12) -> str:
    """CSV rows (kind, n, m, x_count, local_dim) with exact-rational values."""
    lines = ["kind,n,m,x_count,local_dim,local_dim_decimal"]
    rows = [(AFTER_ZEROS,) + s for s in report.lower_samples]
    rows += [(AFTER_FREES,) + s for s in report.upper_samples]
    rows.sort(key=lambda r: r[2])
    for kind, n, m, x, value in rows:
        lines.append(f"{kind},{n},{m},{x},{_format_value(value)},{float(value):.{precision}f}")
    return "\n".join(lines) + "\n"


_SAME = "same_as_zeros"


def schedule_to_json(schedule: BlockSchedule) -> dict:
    frees = _SAME if schedule.frees == schedule.zeros else seqgen.spec_to_json(schedule.frees)
    return {
        "base": schedule.base,
        "alphabet": schedule.alphabet,
        "zeros": seqgen.spec_to_json(schedule.zeros),
        "frees": frees,
        "m_cap": schedule.m_cap,
    }


def _parse_big_nat(value) -> int:
    """Accept plain ints or strings like "10^7" for large caps."""
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "^" in text:
            base, _, exp = text.partition("^")
            if base.strip().isdigit() and exp.strip().isdigit():
                return int(base) ** int(exp)
        if text.isdigit():
            return int(text)
    raise InputError(f"expected a natural number, got {value!r}")


def schedule_from_json(obj: dict) -> BlockSchedule:
    if not isinstance(obj, dict):
        raise InputError("block schedule must be a JSON object")
    allowed = {"base", "alphabet", "zeros", "frees", "m_cap"}
    unknown = set(obj) - allowed
    if unknown:
        raise InputError(f"unknown keys in block schedule: {sorted(unknown)}")
    if "base" not in obj or "zeros" not in obj:
        raise InputError("block schedule needs at least base and zeros")
    zeros = seqgen.spec_from_json(obj["zeros"])
    frees_obj = obj.get("frees", _SAME)
    frees = None if frees_obj == _SAME else seqgen.spec_from_json(frees_obj)
    return BlockSchedule(
        base=_parse_big_nat(obj["base"]),
        alphabet=_parse_big_nat(obj.get("alphabet", obj["base"])),
        zeros=zeros,
        frees=frees,
        m_cap=_parse_big_nat(obj.get("m_cap", DEFAULT_M_CAP)),
    )
