"""Incremental prize-collecting Steiner trees with exact verification."""

from __future__ import annotations

from .enumeration import (
    BACKEND,
    SubtreeEnumeration,
    SubtreeTable,
    available_backends,
    enumerate_rooted_subtrees,
    subtree_table,
)
from .errors import *  # noqa: F401,F403
from .evaluate import (
    INF,
    CompetitiveReport,
    StepProfile,
    alg_profile,
    best_forest,
    best_incremental_ordering,
    forest_extraction,
    is_infinite,
    min_alpha,
    min_mu,
    validate_ordering,
    verify_competitive,
)
from .fileformat import parse_instance, read_instance, serialize_instance, write_instance
from .graph import (
    ContractedGraph,
    Edge,
    Forest,
    Instance,
    RootedSubtree,
    Subgraph,
    anchor,
    branch,
    build_instance,
    components,
    contract,
    density,
    eccentricity,
    extend,
    longest_root_path,
    rooted_subtree,
)
from .graph_greedy import density_greedy_graph, min_max_subtree_exact, postprocess_density_order
from .instances import (
    GeneratorSpec,
    gen_fig1,
    gen_fig5,
    gen_fig6a,
    gen_fig6b,
    gen_fig7,
    gen_fig8,
    gen_random_graph,
    gen_random_tree,
)
from .scaling import ParetoFrontier, ScalingTrace, capacity_scaling, optimal_budget_subtree, pareto_frontier
from .tree_greedy import (
    GreedyTrace,
    density_greedy_tree,
    max_density_rooted_subtree,
    min_max_subtree_tree,
)

__version__ = "0.1.0"
