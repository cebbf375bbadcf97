"""Reductions of SUBSET-SUM, 3-SAT and equality ILPs to linear equations
over binary variables with coefficients and constants in {-1, 0, 1}."""

from .core import *  # noqa: F401,F403
from .expansion import expand_to_unit, expansion_size
from .ilp import binarize_ilp, lift_ilp, reduce_ilp, suggest_bit_width
from .solver import (
    SolveLimits,
    SolveResult,
    Status,
    brute_force_3sat,
    brute_force_ilp,
    brute_force_subset_sum,
    lift_subset_sum,
    solve_unit_system,
)
from .subset_sum import (
    bit,
    build_s1,
    build_s2,
    decomposition_params,
    reduce_subset_sum,
    split_by_sign,
)
from .threesat import build_clause_equations, lift_3sat, parse_dimacs, reduce_3sat

__version__ = "0.1.0"
