"""Parallel primal-dual solver for minimum-cost multicut (correlation clustering)."""

from ._core import (
    ContractionMapping,
    Edge,
    Labeling,
    RoundRecord,
    Solution,
    SolverConfig,
    WeightedGraph,
    brute_force_optimum,
    clustering_cost,
    connected_components,
    contract_graph,
    dual_bound,
    generate_grid,
    generate_random,
    greedy_additive_contraction,
    naive_gaec,
    parse_instance,
    read_instance,
    separate_conflicted_cycles,
    serialize_instance,
    solve,
    write_instance,
)

__all__ = [
    "ContractionMapping",
    "Edge",
    "Labeling",
    "RoundRecord",
    "Solution",
    "SolverConfig",
    "WeightedGraph",
    "brute_force_optimum",
    "clustering_cost",
    "connected_components",
    "contract_graph",
    "dual_bound",
    "generate_grid",
    "generate_random",
    "greedy_additive_contraction",
    "naive_gaec",
    "parse_instance",
    "read_instance",
    "separate_conflicted_cycles",
    "serialize_instance",
    "solve",
    "write_instance",
]
