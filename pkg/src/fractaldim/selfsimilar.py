"""Self-similar dimensions, the classical fractal catalog, and fat Cantor sets.

Each catalog entry iterates by replacing every piece with ``pieces`` copies
shrunk by ``scale``, so the stage-m canonical cover has pieces**m sets of
diameter scale**-m and the similarity dimension is log(pieces)/log(scale).
Perimeter/area/volume recurrences are evaluated in exact rational
arithmetic and checked against their summed closed forms; quantities whose
natural unit is irrational (triangle areas) carry the rational coefficient
with the unit recorded separately, so consistency checks stay exact.

The recurrences are the source of truth.  One catalog entry is knowingly
self-inconsistent: the triadic curve's perimeter closed form gives 5 at the
first step while its own recurrence gives 4 (the construction multiplies
the length by 4/3 per step); the check flags it rather than guessing an
intent.  Similarly, ``menger_sponge`` removes 20**(k-1) cubes at step k as
its source states, which differs from the textbook construction; the
``menger_standard`` variant provides the usual volume (20/27)**m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InputError, UnknownCatalogError

QUANT_PERIMETER = "perimeter"
QUANT_AREA = "area"
QUANT_SURFACE_AREA = "surface_area"
QUANT_VOLUME = "volume"


@dataclass(frozen=True)
class PieceRule:
    """Count multiplier and linear shrink divisor of one iteration step."""

    name: str
    pieces: int
    scale: int
    ambient_dim: int

    def __post_init__(self):
        if self.pieces < 1 or self.scale < 2:
            raise InputError("need pieces >= 1 and scale >= 2")


@dataclass(frozen=True)
class IfsRatios:
    """Contraction ratios of an iterated function system."""

    ratios: tuple[float, ...]

    def __post_init__(self):
        if not self.ratios:
            raise InputError("ratio list must be nonempty")
        if any(not 0 < c < 1 for c in self.ratios):
            raise InputError("every ratio must lie strictly in (0, 1)")


@dataclass(frozen=True)
class MoranRoot:
    """Root of sum(C_i**s) = 1 with the final bracket width."""

    s: float
    width: float
    degenerate: bool = False
    iterations: int = 0


@dataclass(frozen=True)
class GeometrySeries:
    """One measured quantity of a catalog fractal: recurrence and closed form.

    ``unit`` names a common constant factored out of both sides (e.g. the
    unit triangle area sqrt(3)/4); values are the exact rational
    coefficients of that unit.
    """

    name: str
    quantity: str
    initial: Fraction
    step: Callable[[int, Fraction], Fraction]
    closed: Callable[[int], Fraction]
    unit: str = "1"

    def values(self, m: int) -> list[Fraction]:
        """Quantity values for iterations 0..m via the recurrence."""
        out = [self.initial]
        for k in range(1, m + 1):
            out.append(self.step(k, out[-1]))
        return out

    def closed_values(self, m: int) -> list[Fraction]:
        return [self.closed(k) for k in range(m + 1)]


@dataclass(frozen=True)
class ConsistencyReport:
    name: str
    quantity: str
    consistent: bool
    max_deviation: Fraction
    first_mismatch: int | None


@dataclass(frozen=True)
class FatCantorStage:
    """Stage-m intervals of a measure-scheduled Cantor construction."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    measure: Fraction


# ---------------------------------------------------------------------------
# catalog

RULES: dict[str, PieceRule] = {
    "cantor": PieceRule("cantor", 2, 3, 1),
    "cantor5": PieceRule("cantor5", 3, 5, 1),
    "koch": PieceRule("koch", 4, 3, 2),
    "quadratic_koch": PieceRule("quadratic_koch", 16, 4, 2),
    "sierpinski_gasket": PieceRule("sierpinski_gasket", 3, 2, 2),
    "sierpinski_carpet": PieceRule("sierpinski_carpet", 8, 3, 2),
    "menger_sponge": PieceRule("menger_sponge", 20, 3, 3),
    "menger_standard": PieceRule("menger_standard", 20, 3, 3),
    "hyperpyramid": PieceRule("hyperpyramid", 9, 2, 4),
}

_ALIASES = {
    "carpet": "sierpinski_carpet",
    "gasket": "sierpinski_gasket",
    "menger": "menger_sponge",
}


def rule(name: str) -> PieceRule:
    key = _ALIASES.get(name, name)
    try:
        return RULES[key]
    except KeyError:
        raise UnknownCatalogError(f"unknown catalog rule {name!r}") from None


def dim_from_rule(rule: PieceRule) -> float:
    """Similarity dimension log(pieces)/log(scale)."""
    return math.log(rule.pieces) / math.log(rule.scale)


# ---------------------------------------------------------------------------
# Moran equation


def moran_solve(ratios: IfsRatios, tol: float = 1e-12, max_iter: int = 200) -> MoranRoot:
    """Unique root of f(s) = sum(C_i**s) = 1 by bracketed bisection.

    f is strictly decreasing from len(ratios) at s=0, so the root lies in
    [0, log(n)/log(1/max C_i)].  A single ratio makes the equation C**s = 1,
    whose only root is s = 0; that case is flagged degenerate.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    cs = ratios.ratios
    if len(cs) == 1:
        return MoranRoot(s=0.0, width=0.0, degenerate=True)

    def f(s: float) -> float:
        return math.fsum(c**s for c in cs)

    hi = math.log(len(cs)) / -math.log(max(cs)) + 1e-9
    lo = 0.0
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if f(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return MoranRoot(s=0.5 * (lo + hi), width=hi - lo, iterations=iterations)


def hausdorff_measure_at(rule: PieceRule, s, m: int) -> float:
    """Stage-m canonical cover sum pieces**m * (scale**-m)**s.

    At the similarity dimension the exponents cancel identically, so the
    value is exactly 1 for every m; the cancellation is detected within a
    few ulps of s so float-rounded dimensions take the exact branch too.
    """
    if m < 0:
        raise InputError("m must be >= 0")
    log_p, log_r = math.log(rule.pieces), math.log(rule.scale)
    step = log_p - float(s) * log_r
    if abs(step) <= 16 * math.ulp(log_p):
        return 1.0
    t = m * step
    if t > 709:
        return math.inf
    if t < -745:
        return 0.0
    return math.exp(t)


# ---------------------------------------------------------------------------
# geometry series


def _geom_sum(ratio: Fraction, k_lo: int, k_hi: int) -> Fraction:
    """sum(ratio**k for k in k_lo..k_hi), exact."""
    return sum((ratio**k for k in range(k_lo, k_hi + 1)), Fraction(0))


def _series(name, quantity, initial, step, closed, unit="1") -> GeometrySeries:
    return GeometrySeries(name, quantity, Fraction(initial), step, closed, unit)


def _koch_series() -> list[GeometrySeries]:
    # each of the 3*4**(k-1) edges loses its middle third and gains two
    # replacement sides; the stated closed form disagrees from m = 1 on
    perimeter = _series(
        "koch",
        QUANT_PERIMETER,
        3,
        lambda k, prev: prev - 3 * 4 ** (k - 1) * Fraction(1, 3**k)
        + 3 * 4 ** (k - 1) * 2 * Fraction(1, 3**k),
        lambda m: 3 * (1 + Fraction(1, 2) * _geom_sum(Fraction(4, 3), 1, m)),
    )
    area = _series(
        "koch",
        QUANT_AREA,
        1,
        lambda k, prev: prev + 3 * 4 ** (k - 1) * Fraction(1, 9**k),
        lambda m: 1 + Fraction(3, 4) * _geom_sum(Fraction(4, 9), 1, m),
        unit="sqrt(3)/4",
    )
    return [perimeter, area]


def _quadratic_koch_series() -> list[GeometrySeries]:
    # every segment is replaced by 8 quarter-length segments: length doubles
    perimeter = _series(
        "quadratic_koch",
        QUANT_PERIMETER,
        4,
        lambda k, prev: prev + 4 * 8 ** (k - 1) * Fraction(4, 4**k),
        lambda m: 4 * (1 + _geom_sum(Fraction(2), 0, m - 1)) if m else Fraction(4),
    )
    # indentations remove exactly what the bumps add back
    area = _series(
        "quadratic_koch",
        QUANT_AREA,
        1,
        lambda k, prev: prev - 4 * 8 ** (k - 1) * Fraction(1, 16**k)
        + 4 * 8 ** (k - 1) * Fraction(1, 16**k),
        lambda m: Fraction(1),
    )
    return [perimeter, area]


def _gasket_series() -> list[GeometrySeries]:
    perimeter = _series(
        "sierpinski_gasket",
        QUANT_PERIMETER,
        3,
        lambda k, prev: prev + 3 ** (k - 1) * 3 * Fraction(1, 2**k),
        lambda m: 3 * (1 + Fraction(1, 2) * _geom_sum(Fraction(3, 2), 0, m - 1))
        if m
        else Fraction(3),
    )
    area = _series(
        "sierpinski_gasket",
        QUANT_AREA,
        1,
        lambda k, prev: prev - 3 ** (k - 1) * Fraction(1, 4**k),
        lambda m: 1 - Fraction(1, 3) * _geom_sum(Fraction(3, 4), 1, m),
        unit="sqrt(3)/4",
    )
    return [perimeter, area]


def _carpet_series() -> list[GeometrySeries]:
    perimeter = _series(
        "sierpinski_carpet",
        QUANT_PERIMETER,
        4,
        lambda k, prev: prev + 8 ** (k - 1) * 4 * Fraction(1, 3**k),
        lambda m: 4 * (1 + Fraction(1, 8) * _geom_sum(Fraction(8, 3), 1, m)),
    )
    area = _series(
        "sierpinski_carpet",
        QUANT_AREA,
        1,
        lambda k, prev: prev - 8 ** (k - 1) * Fraction(1, 9**k),
        lambda m: 1 - Fraction(1, 8) * _geom_sum(Fraction(8, 9), 1, m),
    )
    return [perimeter, area]


def _menger_series() -> list[GeometrySeries]:
    surface = _series(
        "menger_sponge",
        QUANT_SURFACE_AREA,
        6,
        lambda k, prev: prev - 6 * 8 ** (k - 1) * Fraction(1, 9**k)
        + 20 ** (k - 1) * 6 * 4 * Fraction(1, 9**k),
        lambda m: 6
        * (
            1
            + sum(
                (
                    Fraction(1, 5) * Fraction(20, 9) ** k
                    - Fraction(1, 8) * Fraction(8, 9) ** k
                    for k in range(1, m + 1)
                ),
                Fraction(0),
            )
        ),
    )
    volume = _series(
        "menger_sponge",
        QUANT_VOLUME,
        1,
        lambda k, prev: prev - 20 ** (k - 1) * Fraction(1, 27**k),
        lambda m: 1 - Fraction(1, 20) * _geom_sum(Fraction(20, 27), 1, m),
    )
    return [surface, volume]


def _menger_standard_series() -> list[GeometrySeries]:
    volume = _series(
        "menger_standard",
        QUANT_VOLUME,
        1,
        lambda k, prev: prev * Fraction(20, 27),
        lambda m: Fraction(20, 27) ** m,
    )
    return [volume]


_GEOMETRY_BUILDERS = {
    "koch": _koch_series,
    "quadratic_koch": _quadratic_koch_series,
    "sierpinski_gasket": _gasket_series,
    "sierpinski_carpet": _carpet_series,
    "menger_sponge": _menger_series,
    "menger_standard": _menger_standard_series,
}


def geometry_catalog(name: str) -> list[GeometrySeries]:
    key = _ALIASES.get(name, name)
    try:
        return _GEOMETRY_BUILDERS[key]()
    except KeyError:
        raise UnknownCatalogError(f"no geometry series for {name!r}") from None


def geometry_series(name: str, m: int) -> dict[str, list[Fraction]]:
    """Recurrence values for iterations 0..m, one list per quantity."""
    if m < 0:
        raise InputError("m must be >= 0")
    return {series.quantity: series.values(m) for series in geometry_catalog(name)}


def closed_form_check(name: str, m_max: int, tol=Fraction(0)) -> list[ConsistencyReport]:
    """Exact recurrence-vs-closed-form comparison for every quantity of ``name``."""
    tol = Fraction(tol)
    reports = []
    for series in geometry_catalog(name):
        rec = series.values(m_max)
        clo = series.closed_values(m_max)
        deviations = [abs(a - b) for a, b in zip(rec, clo)]
        worst = max(deviations)
        first = next((k for k, d in enumerate(deviations) if d > tol), None)
        reports.append(
            ConsistencyReport(
                name=series.name,
                quantity=series.quantity,
                consistent=first is None,
                max_deviation=worst,
                first_mismatch=first,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# fat Cantor construction


def fat_cantor(measure_seq: Sequence, m: int) -> FatCantorStage:
    """Stage ``m`` of the Cantor construction with prescribed stage measures.

    ``measure_seq[i]`` is the total length kept at stage i; the sequence
    must start at 1 and be nonincreasing (constant entries leave nothing to
    remove at that stage).  Stage m consists of 2**m closed intervals of
    equal length measure_seq[m]/2**m, keeping both ends of each parent.
    """
    seq = [Fraction(a) for a in measure_seq]
    if len(seq) <= m:
        raise InputError(f"need at least {m + 1} measures for stage {m}")
    if seq[0] != 1:
        raise InputError("the stage-0 measure must be 1")
    if any(not 0 < b <= a for a, b in zip(seq, seq[1:])):
        raise InputError("measures must be nonincreasing and stay in (0, 1]")
    intervals: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(1))]
    for k in range(1, m + 1):
        half = seq[k] / 2**k
        nxt = []
        for lo, hi in intervals:
            nxt.append((lo, lo + half))
            nxt.append((hi - half, hi))
        intervals = nxt
    return FatCantorStage(intervals=tuple(intervals), measure=seq[m])
