"""EFX allocations of indivisible chores for three tractable instance classes."""
from .algorithms import (
    RankPattern,
    RoundRobinTrace,
    SolveResult,
    choose_order_for_ranks,
    round_robin,
    solve,
    solve_bivalued_three,
    solve_identical_ordering,
    solve_small_m,
)
from .efx_graph import (
    EfxGraph,
    EnvyDigraph,
    Matching,
    add_chore_for_min_agent,
    build_graph,
    find_perfect_matching,
    insert_chore_keeping_matching,
    rotate_to_min_edge,
)
from .errors import CapExceeded, EfxError, InputError, InvariantViolation, PreconditionError
from .model import (
    Allocation,
    ChoreKind,
    ChoreType,
    Instance,
    Owner,
    Regime,
    RegimeKind,
    bundle_cost,
    classify_chore,
    classify_regimes,
    is_identical_ordering,
    scale_bivalued,
)
from .oracle import EnvyReport, enumerate_efx, envy_report, is_ef1, is_efx

__version__ = "0.1.0"
