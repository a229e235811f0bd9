"""Co-session ranking engine.

Recommendations for a seed object are produced in four stages over a frozen
session graph:

1. expand to the kernels whose sessions contain the seed;
2. expand again to every object those kernels point at (the candidates);
3. score each candidate by its incoming edges, which under the default
   subgraph scope is exactly the number of sessions it shares with the seed;
4. sort descending, break ties by ascending object id, and drop the seed.

Three variants extend the base flow: weighted scoring (each edge contributes
its kernel's class weight instead of 1), a third expansion layer that reaches
objects two sessions away while pruning single-object sessions, and multi-seed
scoring over the pathway of objects a user has viewed.

All functions are pure reads over the frozen graph and safe to call
concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

from .errors import (
    EmptyPathwayError,
    GraphNotFrozenError,
    InvalidGraphError,
    MissingWeightsError,
    UnknownObjectError,
)
from .graph import NodeId, SessionGraph

Score = float  # int for unit counting, float once weights enter


class Variant(str, Enum):
    BASE = "base"
    WEIGHTED = "weighted"
    THREE_LAYER = "three-layer"
    PATHWAY = "pathway"


class DegreeScope(str, Enum):
    """Where candidate in-degrees are counted.

    SUBGRAPH counts only edges from the seed's own session kernels, i.e. the
    co-session count with the seed. GLOBAL counts every incoming edge in the
    full graph, so the score of a candidate ignores how often it co-occurs
    with the seed.
    """

    SUBGRAPH = "subgraph"
    GLOBAL = "global"


@dataclass(frozen=True)
class ClassWeights:
    """Per-class edge weights; classes not listed default to weight 1."""

    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for cid, w in self.weights.items():
            if w < 0:
                raise ValueError(f"weight for class {cid!r} must be >= 0, got {w}")

    def weight_of(self, class_id: str) -> float:
        return self.weights.get(class_id, 1.0)

    @classmethod
    def parse(cls, text: str) -> "ClassWeights":
        """Parse the compact "K1=2,K2=0.5" form used by the CLI and service."""
        weights = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            cid, sep, value = part.partition("=")
            if not sep or not cid.strip():
                raise ValueError(f"bad weight entry {part!r}, expected CLASS=NUMBER")
            weights[cid.strip()] = float(value)
        return cls(weights)


@dataclass(frozen=True)
class RecommendParams:
    variant: Variant = Variant.BASE
    degree_scope: DegreeScope = DegreeScope.SUBGRAPH
    weights: ClassWeights | None = None
    k: int | None = None

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.variant is Variant.WEIGHTED and self.weights is None:
            raise MissingWeightsError("weighted variant requires class weights")


@dataclass(frozen=True)
class Neighborhood:
    """Two-hop expansion around a seed object.

    ``kernels`` is the seed's session kernels; ``candidate_edges`` every edge
    leaving those kernels; ``candidates`` the targets of those edges. The seed
    itself is always among the candidates.
    """

    seed: NodeId
    kernels: frozenset[NodeId]
    candidate_edges: frozenset[tuple[NodeId, NodeId]] = frozenset()
    candidates: frozenset[NodeId] = frozenset()


@dataclass(frozen=True)
class RecommendationVector:
    """Ranked (object, score) list for a seed object or seed pathway.

    Scores are non-increasing, objects pairwise distinct, equal scores ordered
    by ascending object id, and no entry ever equals the seed (or any pathway
    element).
    """

    seed: NodeId | tuple[NodeId, ...] | None
    entries: tuple[tuple[NodeId, Score], ...]
    params: RecommendParams = RecommendParams()

    def __post_init__(self):
        seeds = self._seed_set()
        last = None
        seen = set()
        for obj, score in self.entries:
            if obj in seeds:
                raise ValueError(f"seed {obj} present in recommendation entries")
            if obj in seen:
                raise ValueError(f"duplicate entry for {obj}")
            seen.add(obj)
            if last is not None and score > last:
                raise ValueError("scores must be non-increasing")
            last = score

    def _seed_set(self) -> frozenset[NodeId]:
        if self.seed is None:
            return frozenset()
        if isinstance(self.seed, NodeId):
            return frozenset([self.seed])
        return frozenset(self.seed)

    def objects(self) -> tuple[NodeId, ...]:
        return tuple(obj for obj, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def expand_one(g: SessionGraph, m: NodeId) -> Neighborhood:
    """First expansion: the kernels of every session containing ``m``."""
    _require_ready(g)
    return Neighborhood(seed=m, kernels=g.kernels_of(m))


def expand_two(g: SessionGraph, nb: Neighborhood) -> Neighborhood:
    """Second expansion: all edges and objects of the seed's session kernels."""
    edges = set()
    candidates = set()
    for kernel in nb.kernels:
        for obj in g.objects_of(kernel).objects:
            edges.add((kernel, obj))
            candidates.add(obj)
    return replace(
        nb, candidate_edges=frozenset(edges), candidates=frozenset(candidates)
    )


def score_candidates(
    g: SessionGraph, nb: Neighborhood, params: RecommendParams
) -> dict[NodeId, Score]:
    """Incoming-edge scores for every candidate, before seed exclusion.

    Under SUBGRAPH scope each candidate edge contributes once (or its kernel's
    class weight for the weighted variant). Under GLOBAL scope all incoming
    edges in the full graph contribute, including kernels outside the seed's
    sessions.
    """
    weigh = _edge_weight(params)
    scores: dict[NodeId, Score] = {}
    if params.degree_scope is DegreeScope.GLOBAL:
        for obj in nb.candidates:
            scores[obj] = sum(weigh(g, kernel) for kernel in g.kernels_of(obj))
    else:
        for obj in nb.candidates:
            scores[obj] = 0
        for kernel, obj in nb.candidate_edges:
            scores[obj] += weigh(g, kernel)
    return scores


def _edge_weight(params: RecommendParams):
    if params.variant is Variant.WEIGHTED:
        if params.weights is None:
            raise MissingWeightsError("weighted variant requires class weights")
        weights = params.weights
        return lambda g, kernel: weights.weight_of(g.class_of(kernel))
    return lambda g, kernel: 1


def rank(
    scores: Mapping[NodeId, Score],
    exclude: frozenset[NodeId] | set[NodeId],
    k: int | None = None,
    *,
    seed=None,
    params: RecommendParams = RecommendParams(),
) -> RecommendationVector:
    """Order scores descending with ascending-id tie-break, dropping excluded
    ids and zero scores (zero means an explicitly ignored class)."""
    items = [(obj, s) for obj, s in scores.items() if obj not in exclude and s > 0]
    items.sort(key=lambda item: (-item[1], item[0].sort_key))
    if k is not None:
        items = items[:k]
    return RecommendationVector(seed=seed, entries=tuple(items), params=params)


def recommend(
    g: SessionGraph, m: NodeId, params: RecommendParams | None = None
) -> RecommendationVector:
    """Full ranking pipeline for a single seed object."""
    params = params or RecommendParams()
    if params.variant is Variant.THREE_LAYER:
        return recommend_three_layer(g, m, params)
    nb = expand_two(g, expand_one(g, m))
    scores = score_candidates(g, nb, params)
    return rank(scores, {m}, params.k, seed=m, params=params)


def recommend_three_layer(
    g: SessionGraph, m: NodeId, params: RecommendParams | None = None
) -> RecommendationVector:
    """Variant that expands one layer further before scoring.

    Sessions adjacent to any candidate are pulled in, sessions holding a
    single object are discarded, and the surviving edges are counted as
    incoming score. Objects that never share a session with the seed can
    surface this way.
    """
    params = params or RecommendParams(variant=Variant.THREE_LAYER)
    _require_ready(g)
    scores = _three_layer_scores(g, m)
    return rank(scores, {m}, params.k, seed=m, params=params)


def _three_layer_scores(g: SessionGraph, m: NodeId) -> dict[NodeId, int]:
    nb = expand_two(g, expand_one(g, m))
    layer_kernels = set()
    for obj in nb.candidates:
        layer_kernels |= g.kernels_of(obj)
    # single-object sessions carry no co-occurrence signal; out-degree is
    # taken over the full graph because session size is a session property
    kept = [k for k in layer_kernels if g.out_degree(k) > 1]
    scores: dict[NodeId, int] = {}
    for kernel in kept:
        for obj in g.objects_of(kernel).objects:
            scores[obj] = scores.get(obj, 0) + 1
    return scores


def recommend_pathway(
    g: SessionGraph,
    pathway: list[NodeId] | tuple[NodeId, ...],
    params: RecommendParams | None = None,
) -> RecommendationVector:
    """Multi-seed ranking over the ordered objects a user has viewed.

    Per-seed score maps are computed with the same variant and scope rules and
    summed; a repeated pathway element contributes once per occurrence. Every
    pathway element is excluded from the result.
    """
    params = params or RecommendParams(variant=Variant.PATHWAY)
    _require_ready(g)
    if not pathway:
        raise EmptyPathwayError("pathway must contain at least one object")
    unknown = [m for m in pathway if not g.has_object(m)]
    if unknown:
        ids = ", ".join(str(m) for m in unknown)
        raise UnknownObjectError(f"unknown objects in pathway: {ids}", unknown)
    totals: dict[NodeId, Score] = {}
    for m in pathway:
        if params.variant is Variant.THREE_LAYER:
            seed_scores = _three_layer_scores(g, m)
        else:
            nb = expand_two(g, expand_one(g, m))
            seed_scores = score_candidates(g, nb, params)
        for obj, s in seed_scores.items():
            totals[obj] = totals.get(obj, 0) + s
    return rank(totals, set(pathway), params.k, seed=tuple(pathway), params=params)


def normalize_score(score: Score) -> int | float:
    """Collapse integral scores to int so exports match across variants."""
    value = float(score)
    if value.is_integer():
        return int(value)
    return value


def _require_ready(g: SessionGraph) -> None:
    if not g.frozen:
        raise GraphNotFrozenError("graph must be frozen before recommending")
    if not g.valid:
        report = g.validation_report
        count = len(report.violations) if report else 0
        raise InvalidGraphError(f"graph failed validation with {count} violation(s)")
