"""Exact fractal-dimension toolkit.

Digit-block sets with exact cover counts, box-counting and two-grid
estimators, Moran-equation self-similar dimensions with a classical
fractal catalog, and finite-resolution grid measures with an optimal
interval-partition algorithm.
"""

from .blockset import (
    AFTER_FREES,
    AFTER_ZEROS,
    BlockSchedule,
    CutPoint,
    DimReport,
    cell_source,
    cover_count,
    cut_points,
    digit_role,
    dim_bounds,
    hausdorff_dim,
    hs_measure_estimate,
    local_dim,
    sample_points,
)
from .boxdim import (
    CellSource,
    CountSeries,
    CriticalExponent,
    IntervalSource,
    RuleSource,
    TwoGridResult,
    classify_d,
    closure_count_check,
    count_series,
    critical_d,
    slope_dim,
    two_grid_dim,
)
from .hypergrid import (
    DeltaPartition,
    HyperGrid,
    InternalSet,
    cantor_stage,
    discrete_lebesgue,
    h_delta_s_dp,
    h_delta_s_greedy,
    lebesgue_bounds,
    outer_h_measure,
)
from .selfsimilar import (
    GeometrySeries,
    IfsRatios,
    PieceRule,
    closed_form_check,
    dim_from_rule,
    fat_cantor,
    geometry_series,
    hausdorff_measure_at,
    moran_solve,
    rule,
)
from .seqgen import (
    GrowthVerdict,
    SequenceSpec,
    dimzero_criterion,
    lemma_inequality_check,
    prefix_sums,
    squared_sum_check,
    tail_domination,
    terms,
)

__version__ = "0.1.0"

__all__ = [
    "AFTER_FREES",
    "AFTER_ZEROS",
    "BlockSchedule",
    "CellSource",
    "CountSeries",
    "CriticalExponent",
    "CutPoint",
    "DeltaPartition",
    "DimReport",
    "GeometrySeries",
    "GrowthVerdict",
    "HyperGrid",
    "IfsRatios",
    "InternalSet",
    "IntervalSource",
    "PieceRule",
    "RuleSource",
    "SequenceSpec",
    "TwoGridResult",
    "cantor_stage",
    "cell_source",
    "classify_d",
    "closed_form_check",
    "closure_count_check",
    "count_series",
    "cover_count",
    "critical_d",
    "cut_points",
    "digit_role",
    "dim_bounds",
    "dim_from_rule",
    "dimzero_criterion",
    "discrete_lebesgue",
    "fat_cantor",
    "geometry_series",
    "h_delta_s_dp",
    "h_delta_s_greedy",
    "hausdorff_dim",
    "hausdorff_measure_at",
    "hs_measure_estimate",
    "lebesgue_bounds",
    "lemma_inequality_check",
    "local_dim",
    "moran_solve",
    "outer_h_measure",
    "prefix_sums",
    "rule",
    "sample_points",
    "slope_dim",
    "squared_sum_check",
    "tail_domination",
    "terms",
    "two_grid_dim",
]
