"""Multi-parameter dyadic maximal operators and weighted inequality experiments.

The package computes complexity-bounded maximal functions on dense dyadic
grids, runs the two greedy rectangle-selection procedures with their
sparseness and covering verifiers, and measures empirical constants for the
weighted weak-type, strong-type and endpoint inequalities they support.
"""

from .errors import InputError, InvariantViolation, ResourceLimitError
from .grids import (
    DyadicInterval,
    DyadicRect,
    Grid,
    Shape,
    SummedAreaTable,
    build_prefix_sum,
    enumerate_shapes,
    lp_norm,
    read_grid,
    rect_average,
    superlevel_measure,
    write_grid,
)
from .maximal import (
    MaximalField,
    compose,
    compose_2d,
    maximal,
    maximal_bruteforce,
)
from .covering import (
    RectFamily,
    SelectionResult,
    check_covering_exp,
    check_covering_half,
    make_canonical,
    overlap_integral,
    partition_by_order,
    read_rect_family,
    replay_exp_criterion,
    replay_half_criterion,
    select_exp,
    select_half,
    sparseness_report,
    split_by_max_block,
    write_rect_family,
)
from .inequalities import (
    RatioReport,
    apstar,
    elementary_ineq_gap,
    endpoint_ratio,
    llogl_ratio,
    llogl_ratio_2d,
    phi,
    strong_fs_ratio,
    weak_fs_ratio,
    young_gap,
)
from .generators import GENERATORS, generate
from .sweep import (
    OracleDiffReport,
    SweepConfig,
    random_rects,
    run_oracle_diff,
    run_sweep,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "InvariantViolation",
    "ResourceLimitError",
    "Grid",
    "DyadicInterval",
    "DyadicRect",
    "Shape",
    "SummedAreaTable",
    "build_prefix_sum",
    "rect_average",
    "superlevel_measure",
    "lp_norm",
    "enumerate_shapes",
    "read_grid",
    "write_grid",
    "maximal",
    "maximal_bruteforce",
    "compose",
    "compose_2d",
    "MaximalField",
    "RectFamily",
    "SelectionResult",
    "partition_by_order",
    "split_by_max_block",
    "make_canonical",
    "select_half",
    "select_exp",
    "overlap_integral",
    "check_covering_half",
    "check_covering_exp",
    "sparseness_report",
    "replay_half_criterion",
    "replay_exp_criterion",
    "read_rect_family",
    "write_rect_family",
    "RatioReport",
    "apstar",
    "weak_fs_ratio",
    "strong_fs_ratio",
    "endpoint_ratio",
    "llogl_ratio_2d",
    "llogl_ratio",
    "phi",
    "young_gap",
    "elementary_ineq_gap",
    "GENERATORS",
    "generate",
    "SweepConfig",
    "run_sweep",
    "write_csv",
    "run_oracle_diff",
    "OracleDiffReport",
    "random_rects",
]
