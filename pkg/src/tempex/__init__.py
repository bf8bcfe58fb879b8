"""Exploration schedules for near-static temporal graphs.

A temporal graph whose snapshots each miss at most k edges of a fixed
spanning tree can be explored in time linear in the number of vertices (up
to a factor in k). This package provides the data model and wire format, the
multi-agent roundabout simulation, epoch planning and covering-tuple
selection, spanning-tree recovery, instance generators, brute-force oracles,
and a CLI tying them together.
"""

__version__ = "0.1.0"

from .core import (
    ConnectivityReport,
    Deficiency,
    Edge,
    ForemostResult,
    ParseError,
    SpanningTree,
    StaticGraph,
    TemporalGraph,
    TemporalWalk,
    canonical_edge,
    deficiency_count,
    foremost_walk,
    parse_spanning_tree,
    parse_temporal_graph,
    serialize_spanning_tree,
    serialize_temporal_graph,
    verify_delta_connectivity,
)
from .gen import GenResult, GenSpec, gen_blocking_front, gen_random_deficient
from .oracle import OracleResult, foremost_arrival_oracle, optimal_exploration_time
from .roundabout import (
    InvariantViolation,
    RoundaboutState,
    RoundaboutTrace,
    check_state_invariants,
    eliminate_redundant,
    movement_step,
    replay_trace,
    run_roundabout,
)
from .scheduler import (
    Enumerate,
    EpochPlan,
    ExploreStats,
    InsufficientSnapshots,
    LasVegas,
    RepositionFailed,
    Schedule,
    VerifyReport,
    assemble_schedule,
    common_refinement,
    explore,
    explore_detailed,
    find_covering_tuple,
    is_covering_tuple,
    parse_schedule,
    partition_epochs,
    rho_for,
    serialize_schedule,
    step_budget,
    tau,
    verify_schedule,
)
from .tour import CircularInterval, DfsTour, build_dfs_tour, covered_by_union
from .treefind import EdgeWeights, TreeStats, absence_weights, find_good_tree

__all__ = [name for name in dir() if not name.startswith("_")]
