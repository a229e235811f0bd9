"""In-memory bipartite session-graph recommender.

Build a graph of sessions (visits, orders, wish lists) pointing at objects
(products, videos, articles), freeze it, and rank objects for a seed by how
strongly they co-occur with it across sessions.
"""

from .engine import (
    ClassWeights,
    DegreeScope,
    Neighborhood,
    RecommendParams,
    RecommendationVector,
    Variant,
    expand_one,
    expand_two,
    rank,
    recommend,
    recommend_pathway,
    recommend_three_layer,
    score_candidates,
)
from .evaluation import (
    ActionLog,
    ActionRecord,
    RecommenderHandle,
    assign_algorithm,
    baseline_popularity,
    baseline_random,
    efficiency,
    iverson,
    simulate,
)
from .graph import (
    GraphStats,
    KernelClass,
    NodeId,
    NodeKind,
    Session,
    SessionGraph,
    ValidationReport,
    kernel_id,
    object_id,
)
from .ingest import (
    EdgeFileSpec,
    IngestReport,
    ObjectCatalog,
    export_edges,
    export_vector,
    load_catalog,
    load_edges,
)

__all__ = [
    "ActionLog",
    "ActionRecord",
    "ClassWeights",
    "DegreeScope",
    "EdgeFileSpec",
    "GraphStats",
    "IngestReport",
    "KernelClass",
    "Neighborhood",
    "NodeId",
    "NodeKind",
    "ObjectCatalog",
    "RecommendParams",
    "RecommendationVector",
    "RecommenderHandle",
    "Session",
    "SessionGraph",
    "ValidationReport",
    "Variant",
    "assign_algorithm",
    "baseline_popularity",
    "baseline_random",
    "efficiency",
    "expand_one",
    "expand_two",
    "export_edges",
    "export_vector",
    "iverson",
    "kernel_id",
    "load_catalog",
    "load_edges",
    "object_id",
    "rank",
    "recommend",
    "recommend_pathway",
    "recommend_three_layer",
    "score_candidates",
    "simulate",
]

__version__ = "0.1.0"
