"""Grid measure and minimal-partition tests.

The dynamic program is the independent oracle for the greedy partition;
both report costs through the same canonical arithmetic, so optimal
partitions cost bit-identically.  Lebesgue bounds are cross-checked by
brute-force membership loops over all grid indices.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fractaldim.errors import InfeasibleDeltaError, InputError
from fractaldim.hypergrid import (
    HyperGrid,
    InternalSet,
    cantor_stage,
    discrete_lebesgue,
    h_delta_s_dp,
    h_delta_s_greedy,
    internal_set_from_json,
    internal_set_to_json,
    lebesgue_bounds,
    merge_runs,
    outer_h_measure,
    trace_superset,
)

CANTOR_DIM = math.log(2) / math.log(3)


def brute_lebesgue_bounds(intervals, grid):
    """Oracle: loop over every grid index and test membership directly."""
    N = grid.N
    inner = outer = 0
    for i in range(N + 1):
        point = Fraction(i, N)
        if any(a <= point <= b for a, b in intervals):
            inner += 1
        lo, hi = Fraction(i, N), Fraction(i + 1, N)
        if any(lo <= b and hi > a for a, b in intervals):
            outer += 1
    return Fraction(inner, N + 1), Fraction(outer, N + 1)


class TestInternalSet:
    def test_card(self):
        assert InternalSet(((0, 9), (20, 24))).card == 15

    def test_rejects_touching_runs(self):
        with pytest.raises(InputError):
            InternalSet(((0, 5), (6, 8)))
        with pytest.raises(InputError):
            InternalSet(((0, 5), (3, 8)))

    def test_merge_runs_normalizes(self):
        iset = merge_runs([(6, 8), (0, 5), (20, 22)])
        assert iset.runs == ((0, 8), (20, 22))

    def test_json_round_trip(self):
        grid, iset = internal_set_from_json({"N": 100, "runs": [[0, 9], [20, 24]]})
        assert grid.N == 100
        assert iset.runs == ((0, 9), (20, 24))
        assert internal_set_to_json(iset, grid) == {"N": 100, "runs": [[0, 9], [20, 24]]}

    def test_json_validation(self):
        with pytest.raises(InputError):
            internal_set_from_json({"N": 100})
        with pytest.raises(InputError):
            internal_set_from_json({"N": 10, "runs": [[0, 20]]})
        with pytest.raises(InputError):
            internal_set_from_json({"N": 10, "runs": [[0, 2]], "what": 1})


class TestDiscreteLebesgue:
    def test_full_grid(self):
        grid = HyperGrid(100)
        assert discrete_lebesgue(InternalSet(((0, 100),)), grid) == 1

    def test_half_grid(self):
        grid = HyperGrid(100)
        assert discrete_lebesgue(InternalSet(((0, 50),)), grid) == Fraction(51, 101)

    def test_empty(self):
        assert discrete_lebesgue(InternalSet(()), HyperGrid(10)) == 0

    def test_finitely_additive_and_monotone(self):
        grid = HyperGrid(50)
        b1 = InternalSet(((0, 4),))
        b2 = InternalSet(((10, 14),))
        union = InternalSet(((0, 4), (10, 14)))
        assert discrete_lebesgue(union, grid) == discrete_lebesgue(
            b1, grid
        ) + discrete_lebesgue(b2, grid)
        assert discrete_lebesgue(b1, grid) <= discrete_lebesgue(union, grid)


class TestLebesgueBounds:
    def test_unit_interval(self):
        assert lebesgue_bounds([(0, 1)], HyperGrid(1000)) == (1, 1)

    def test_quarter_to_half(self):
        inner, outer = lebesgue_bounds(
            [(Fraction(1, 4), Fraction(1, 2))], HyperGrid(1000)
        )
        for value in (inner, outer):
            assert abs(value - Fraction(1, 4)) <= Fraction(2, 1001)

    def test_coarse_grid_artifact(self):
        inner, outer = lebesgue_bounds([(0, Fraction(1, 3))], HyperGrid(3))
        assert inner == outer == Fraction(1, 2)

    def test_empty(self):
        assert lebesgue_bounds([], HyperGrid(10)) == (0, 0)

    def test_overlapping_inputs_merged(self):
        grid = HyperGrid(60)
        merged = lebesgue_bounds(
            [(Fraction(1, 6), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3))], grid
        )
        direct = lebesgue_bounds([(Fraction(1, 6), Fraction(2, 3))], grid)
        assert merged == direct

    def test_against_brute_force(self):
        cases = [
            ([(Fraction(1, 7), Fraction(3, 7))], 23),
            ([(Fraction(0), Fraction(1, 3)), (Fraction(2, 3), Fraction(1))], 17),
            ([(Fraction(1, 4), Fraction(1, 4))], 10),  # degenerate point
            ([(Fraction(2, 31), Fraction(5, 31)), (Fraction(6, 31), Fraction(1, 2))], 31),
        ]
        for intervals, N in cases:
            grid = HyperGrid(N)
            assert lebesgue_bounds(intervals, grid) == brute_lebesgue_bounds(
                intervals, grid
            )

    def test_gap_bound(self):
        intervals = [(Fraction(1, 7), Fraction(2, 7)), (Fraction(3, 7), Fraction(6, 7))]
        for N in (10, 100, 997):
            inner, outer = lebesgue_bounds(intervals, HyperGrid(N))
            assert inner <= outer
            assert outer - inner <= Fraction(2 * len(intervals), N + 1)


class TestGreedyPartition:
    def test_full_grid_example(self):
        # 101 points at capacity 10: ten full intervals and one singleton
        part = h_delta_s_greedy(
            InternalSet(((0, 100),)), Fraction(1, 10), 1, HyperGrid(100)
        )
        assert part.cost == 1.01
        assert len(part.intervals) == 11

    def test_two_runs_half_power(self):
        part = h_delta_s_greedy(
            InternalSet(((0, 4), (50, 54))), Fraction(1, 20), 0.5, HyperGrid(100)
        )
        assert part.cost == pytest.approx(2 * (5 / 100) ** 0.5, abs=1e-12)
        assert len(part.intervals) == 2

    def test_single_point(self):
        grid = HyperGrid(64)
        part = h_delta_s_greedy(InternalSet(((7, 7),)), Fraction(1, 4), 0.5, grid)
        assert part.cost == pytest.approx((1 / 64) ** 0.5, abs=1e-15)

    def test_intervals_partition_the_set(self):
        B = InternalSet(((0, 30), (40, 45)))
        part = h_delta_s_greedy(B, Fraction(1, 16), 0.7, HyperGrid(100))
        covered = sorted(
            i for a, b in part.intervals for i in range(a, b + 1)
        )
        assert covered == sorted(
            i for a, b in B.runs for i in range(a, b + 1)
        )
        D = 100 // 16  # floor(delta*N)
        assert all(b - a + 1 <= D for a, b in part.intervals)

    def test_infeasible_delta(self):
        with pytest.raises(InfeasibleDeltaError):
            h_delta_s_greedy(InternalSet(((0, 3),)), Fraction(1, 200), 1, HyperGrid(100))

    def test_s_validation(self):
        with pytest.raises(InputError):
            h_delta_s_greedy(InternalSet(((0, 3),)), Fraction(1, 10), 0, HyperGrid(100))


class TestDpOracle:
    def test_reproduces_greedy_examples(self):
        grid = HyperGrid(100)
        cases = [
            (InternalSet(((0, 100),)), Fraction(1, 10), 1),
            (InternalSet(((0, 4), (50, 54))), Fraction(1, 20), 0.5),
            (InternalSet(((7, 7),)), Fraction(1, 4), 0.3),
        ]
        for B, delta, s in cases:
            greedy = h_delta_s_greedy(B, delta, s, grid)
            dp = h_delta_s_dp(B, delta, s, grid)
            assert dp.cost == greedy.cost

    def test_dp_never_beats_any_explicit_partition(self):
        # exhaustive check on a small run: every composition of 6 points
        # into parts of size <= 3 costs at least the DP optimum
        grid = HyperGrid(30)
        B = InternalSet(((4, 9),))
        s = 0.5
        dp = h_delta_s_dp(B, Fraction(1, 10), s, grid)

        def compositions(total, cap):
            if total == 0:
                yield ()
                return
            for first in range(1, min(cap, total) + 1):
                for rest in compositions(total - first, cap):
                    yield (first,) + rest

        best = min(
            math.fsum((c / 30) ** s for c in parts) for parts in compositions(6, 3)
        )
        assert dp.cost <= best + 1e-15


class TestTraceSuperset:
    def test_unit_interval_full_grid(self):
        iset = trace_superset([(0, 1)], HyperGrid(100))
        assert iset.runs == ((0, 100),)

    def test_enlargement_and_clamping(self):
        iset = trace_superset([(Fraction(1, 4), Fraction(1, 2))], HyperGrid(8))
        assert iset.runs == ((1, 5),)  # trace 2..4 widened one index each side

    def test_cantor_stage_runs(self):
        m, N = 2, 3**4
        iset = trace_superset(cantor_stage(m), HyperGrid(N))
        assert len(iset.runs) == 2**m
        # interior runs widen by one index per side; the two boundary runs
        # clamp at the grid edge and only widen inward
        lengths = [b - a + 1 for a, b in iset.runs]
        base = N // 3**m + 1
        assert lengths == [base + 1] + [base + 2] * (2**m - 2) + [base + 1]


class TestOuterHMeasure:
    def test_unit_interval_tends_to_one(self):
        grid = HyperGrid(10**5)
        rows = outer_h_measure([(0, 1)], 1, [Fraction(1, 10), Fraction(1, 100)], grid)
        for _, cost in rows:
            assert abs(cost - 1.0) < 1e-3

    def test_cantor_stage_stable_at_matched_delta(self):
        # cost = 2**m * (3**-m)**s = 1 up to the per-run remainder intervals,
        # whose total contribution shrinks by half per stage
        costs = []
        for m in (2, 3, 4):
            N = 3 ** (2 * m + 4)
            rows = outer_h_measure(
                cantor_stage(m), CANTOR_DIM, [Fraction(1, 3**m)], HyperGrid(N)
            )
            costs.append(rows[0][1])
        assert costs[0] == pytest.approx(1.0, abs=0.05)
        deviations = [abs(c - 1.0) for c in costs]
        assert deviations[0] > deviations[1] > deviations[2]

    def test_blowup_at_squared_delta(self):
        costs = []
        for m in range(2, 7):
            N = 3 ** (2 * m + 4)
            rows = outer_h_measure(
                cantor_stage(m), CANTOR_DIM, [Fraction(1, 3 ** (2 * m))], HyperGrid(N)
            )
            costs.append(rows[0][1])
        ratios = [b / a for a, b in zip(costs, costs[1:])]
        for r in ratios:
            assert 1.45 <= r <= 1.55

    def test_deltas_must_decrease(self):
        with pytest.raises(InputError):
            outer_h_measure([(0, 1)], 1, [Fraction(1, 100), Fraction(1, 10)], HyperGrid(1000))

    def test_csv_emitter(self):
        from fractaldim.hypergrid import measure_table_csv

        grid = HyperGrid(10**5)
        rows = outer_h_measure([(0, 1)], 1, [Fraction(1, 10), Fraction(1, 100)], grid)
        text = measure_table_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0] == "delta,cost"
        assert lines[1] == "1/10,1.000010000000"
        assert lines[2].startswith("1/100,")


# ---------------------------------------------------------------------------
# properties

MAX_N = 512


@st.composite
def grid_and_set(draw):
    N = draw(st.integers(16, MAX_N))
    n_runs = draw(st.integers(1, 6))
    bounds = sorted(
        draw(
            st.lists(
                st.integers(0, N), min_size=2 * n_runs, max_size=2 * n_runs, unique=True
            )
        )
    )
    runs = []
    for i in range(0, len(bounds) - 1, 2):
        a, b = bounds[i], bounds[i + 1]
        if runs and a <= runs[-1][1] + 1:
            a = runs[-1][1] + 2
            if a > b:
                continue
        runs.append((a, b))
    if not runs:
        runs = [(0, 0)]
    return HyperGrid(N), InternalSet(tuple(runs))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(gs=grid_and_set(), d_small=st.integers(1, 16), d_big=st.integers(1, 16),
       s=st.sampled_from([0.3, 0.5, 1.0]))
def test_monotone_in_delta(gs, d_small, d_big, s):
    grid, B = gs
    lo, hi = sorted((d_small, d_big))
    # delta' = lo/N <= delta = hi/N; smaller delta never costs less
    cost_small = h_delta_s_greedy(B, Fraction(lo, grid.N), s, grid).cost
    cost_big = h_delta_s_greedy(B, Fraction(hi, grid.N), s, grid).cost
    assert cost_small >= cost_big - 1e-12 * max(1.0, cost_big)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(gs=grid_and_set(), d=st.integers(1, 16),
       s_pair=st.sampled_from([(0.3, 0.5), (0.3, 1.0), (0.5, 1.0), (0.7, 0.9)]))
def test_monotone_in_s(gs, d, s_pair):
    grid, B = gs
    s_lo, s_hi = s_pair
    delta = Fraction(d, grid.N)
    cost_lo = h_delta_s_greedy(B, delta, s_lo, grid).cost
    cost_hi = h_delta_s_greedy(B, delta, s_hi, grid).cost
    assert cost_hi <= cost_lo + 1e-12 * max(1.0, cost_lo)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(gs=grid_and_set(), d=st.integers(1, 16), s=st.sampled_from([0.3, 0.5, 1.0]))
def test_additive_over_separated_runs(gs, d, s):
    grid, B = gs
    delta = Fraction(d, grid.N)
    total = h_delta_s_greedy(B, delta, s, grid).cost
    parts = math.fsum(
        h_delta_s_greedy(InternalSet((run,)), delta, s, grid).cost for run in B.runs
    )
    assert total == pytest.approx(parts, rel=1e-12, abs=1e-15)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(gs=grid_and_set(), d=st.integers(1, 16))
def test_s1_cost_is_cardinality_over_n(gs, d):
    grid, B = gs
    part = h_delta_s_greedy(B, Fraction(d, grid.N), 1, grid)
    assert part.cost == float(Fraction(B.card, grid.N))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(gs=grid_and_set(), d=st.integers(1, 32), s=st.sampled_from([0.3, 0.5, 1.0]))
def test_greedy_equals_dp(gs, d, s):
    grid, B = gs
    delta = Fraction(d, grid.N)
    assert (
        h_delta_s_greedy(B, delta, s, grid).cost == h_delta_s_dp(B, delta, s, grid).cost
    )


@settings(max_examples=100, derandomize=True, deadline=None)
@given(gs=grid_and_set())
def test_discrete_measure_bounds(gs):
    grid, B = gs
    value = discrete_lebesgue(B, grid)
    assert 0 <= value <= 1
    assert value == Fraction(B.card, grid.N + 1)
