"""Core-periphery decomposition by iterative node-dominance collapse."""

from .collapse import (
    DETERMINISTIC,
    ONE_HOP_VARIANT,
    TWO_HOP_VARIANT,
    CollapseResult,
    DominanceVariant,
    TieBreakPolicy,
    collapse,
    is_dominated,
    random_order_collapse,
    stability_analysis,
)
from .communities import candidate_pipeline, candidate_sets, extend_components, peripheral_components
from .distributed import cross_validate, simulate
from .errors import ContractError, DomcoreError, InputError, ParseError, ResourceError
from .evaluation import (
    CommunitySet,
    descriptive_stats,
    match_evaluate,
    membership_profile,
    pair_metrics,
    shortest_path_share,
)
from .graph import (
    Graph,
    betweenness,
    bfs_shortest_paths,
    build_graph,
    closed_neighborhood,
    clustering_coefficients,
    connected_components,
    read_edge_list,
    two_hop_neighborhood,
)
from .topology import betti, flag_complex, verify_property1, verify_property4

__version__ = "0.1.0"

__all__ = [
    "CollapseResult",
    "CommunitySet",
    "ContractError",
    "DETERMINISTIC",
    "DomcoreError",
    "DominanceVariant",
    "Graph",
    "InputError",
    "ONE_HOP_VARIANT",
    "ParseError",
    "ResourceError",
    "TWO_HOP_VARIANT",
    "TieBreakPolicy",
    "betti",
    "betweenness",
    "bfs_shortest_paths",
    "build_graph",
    "candidate_pipeline",
    "candidate_sets",
    "closed_neighborhood",
    "clustering_coefficients",
    "collapse",
    "connected_components",
    "cross_validate",
    "descriptive_stats",
    "extend_components",
    "flag_complex",
    "is_dominated",
    "match_evaluate",
    "membership_profile",
    "pair_metrics",
    "peripheral_components",
    "random_order_collapse",
    "read_edge_list",
    "shortest_path_share",
    "simulate",
    "stability_analysis",
    "two_hop_neighborhood",
    "verify_property1",
    "verify_property4",
]
