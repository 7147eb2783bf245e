from .gadgets import Gadget, cycle_table, gamma, theta, verify_gadgets, weighted_cycle_sum
from .graph import (
    Edge,
    GraphError,
    PlanarGraph,
    cycle_space_basis,
    grid,
    load_graph,
    marginal_overlap,
    parse_graph,
    product_state_overlap,
    sample_cycle,
    square,
    surface_code_state,
    two_squares,
)
from .mbqc import (
    MBQCError,
    SurfaceCodeInstance,
    brute_force_distribution,
    induced_mbqc_distribution,
    load_schedule,
    mbqc_sample,
    parse_schedule,
    uniform_schedule,
)
from .reduction import (
    PlanarizedDrawing,
    ReductionError,
    count_perfect_matchings,
    k4,
    k33_one_crossing,
    perfect_matchings_via_reduction,
    triple_edge,
)
