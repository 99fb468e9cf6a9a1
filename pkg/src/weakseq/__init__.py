"""Weak sequencings and weak walk realizations of multisets in finite groups."""

from .bounds import BoundReport, expectation_bound, min_ell
from .errors import (
    AttemptsExhausted,
    ConstructionError,
    ContextError,
    GroupAxiomError,
    ParseError,
    PreconditionError,
    WeakSeqError,
    ZeroSumFreeNotFound,
)
from .groups import (
    CyclicGroup,
    CyclicView,
    Group,
    ProductGroup,
    TableGroup,
    cyclic_subgroup,
    dlog,
    element_order,
    parse_group,
    subgroup_intersection,
)
from .montecarlo import MonteCarloReport, build_scenario, monte_carlo_expectation
from .multiset import Multiset, parse_elements, parse_multiset
from .realize import (
    Direction,
    brute_force_realize,
    delta,
    free_window_direction,
    glue,
    realize_multiset,
    realize_pair,
    verify_realization,
)
from .sequencing import (
    block_sequence,
    brute_force_sequence,
    find_zero_sum_free_subset,
    greedy_extend,
    partial_sums,
    randomized_extend,
    sequence_multiset,
    verify_t_weak,
)

__version__ = "0.1.0"
