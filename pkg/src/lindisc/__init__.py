"""Exact algorithms, brackets and oracles for the linear discrepancy of rational matrices."""

from .approx import approx_lindisc
from .core import (
    Bracket,
    InputError,
    Matrix,
    ParseError,
    RefusalError,
    eval_residual,
    operator_inf_norm,
    parse_matrix,
    serialize_matrix,
)
from .lowdim import (
    UnsupportedDimensionError,
    candidate_lines,
    hull_2d,
    leb_linf_2d,
    lindisc_lowdim,
    reachable_points,
)
from .onerow import GapProfile, gap_profile_bruteforce, lindisc_onerow, round_onerow
from .oracle import DeepHoleReport, lindisc_at, lindisc_grid_bracket
from .reduction import (
    MonotoneCnf,
    SubsetSumInstance,
    incidence_matrix,
    nae_satisfiable,
    subset_sum_weight,
)

__all__ = [
    "Bracket", "DeepHoleReport", "GapProfile", "InputError", "Matrix", "MonotoneCnf",
    "ParseError", "RefusalError", "SubsetSumInstance", "UnsupportedDimensionError",
    "approx_lindisc", "candidate_lines", "eval_residual", "gap_profile_bruteforce",
    "hull_2d", "incidence_matrix", "leb_linf_2d", "lindisc_at", "lindisc_grid_bracket",
    "lindisc_lowdim", "lindisc_onerow", "nae_satisfiable", "operator_inf_norm",
    "parse_matrix", "reachable_points", "round_onerow", "serialize_matrix",
    "subset_sum_weight",
]
