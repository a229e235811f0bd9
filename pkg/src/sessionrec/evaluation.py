"""Offline effectiveness measurement for competing recommenders.

Every served recommendation is logged as an action record (algorithm, seed
object, served vector, object the user then chose). The efficiency of an
algorithm is the exact fraction of its records whose chosen object appears in
the served vector, optionally restricted to the first k positions.

Algorithms are assigned to impressions uniformly at random (probability 1/n
for n registered algorithms), so the per-algorithm ratios are comparable. A
seeded simulator with pluggable user models stands in for a live deployment;
the log format is the same either way, so real logs can be replayed.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Protocol

from . import engine
from .errors import (
    EmptyHandleListError,
    NoRecordsForAlgorithmError,
    UnknownObjectError,
)
from .graph import NodeId, SessionGraph, object_id

LOG_HEADER = ["algorithm_id", "seed_object", "recommended", "chosen"]
LIST_SEPARATOR = "|"


def iverson(condition: bool) -> int:
    """1 when the condition holds, 0 otherwise."""
    return 1 if condition else 0


@dataclass(frozen=True)
class ActionRecord:
    algorithm_id: str
    seed_object: NodeId
    recommended: tuple[NodeId, ...]
    chosen: NodeId

    def __post_init__(self):
        if not self.algorithm_id:
            raise ValueError("algorithm_id must be non-empty")
        if len(set(self.recommended)) != len(self.recommended):
            raise ValueError("recommended vector must not contain duplicates")


@dataclass
class ActionLog:
    records: list[ActionRecord] = field(default_factory=list)

    def append(self, record: ActionRecord) -> None:
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def efficiency(log: ActionLog, algorithm_id: str, k: int | None = None) -> Fraction:
    """Exact hit ratio of one algorithm over the log.

    A hit is a record whose chosen object sits in the served vector (its
    first k entries when a cutoff is given). Records with empty vectors still
    count in the denominator: they were served impressions.
    """
    hits = 0
    served = 0
    for record in log:
        match = iverson(record.algorithm_id == algorithm_id)
        served += match
        window = record.recommended if k is None else record.recommended[:k]
        hits += match * iverson(record.chosen in window)
    if served == 0:
        raise NoRecordsForAlgorithmError(f"no records for algorithm {algorithm_id!r}")
    return Fraction(hits, served)


@dataclass(frozen=True)
class RecommenderHandle:
    """A named recommender; the callable maps (graph, seed, rng) to a vector."""

    algorithm_id: str
    fn: Callable[[SessionGraph, NodeId, random.Random], engine.RecommendationVector]

    def __call__(self, g, m, rng):
        return self.fn(g, m, rng)


def assign_algorithm(
    handles: list[RecommenderHandle], rng: random.Random
) -> RecommenderHandle:
    """Uniform 1/n choice among the registered algorithms."""
    if not handles:
        raise EmptyHandleListError("no recommender handles registered")
    return handles[rng.randrange(len(handles))]


class UserModel(Protocol):
    name: str

    def pick_seed(self, g: SessionGraph, rng: random.Random) -> NodeId: ...

    def choose(
        self,
        g: SessionGraph,
        seed: NodeId,
        recommended: tuple[NodeId, ...],
        rng: random.Random,
    ) -> NodeId: ...


class _SeedPicker:
    def pick_seed(self, g, rng):
        objects = g.object_ids()
        return objects[rng.randrange(len(objects))]


class OracleUser(_SeedPicker):
    """Always takes the top recommendation; falls back to the seed when the
    vector is empty (the seed is never part of the vector)."""

    name = "oracle"

    def choose(self, g, seed, recommended, rng):
        return recommended[0] if recommended else seed


class AdversarialUser(_SeedPicker):
    """Always picks outside the vector: the seed qualifies by construction."""

    name = "adversarial"

    def choose(self, g, seed, recommended, rng):
        return seed


class UniformUser(_SeedPicker):
    """Picks any object other than the seed, ignoring the vector."""

    name = "uniform"

    def choose(self, g, seed, recommended, rng):
        objects = [obj for obj in g.object_ids() if obj != seed]
        if not objects:
            return seed
        return objects[rng.randrange(len(objects))]


USER_MODELS: dict[str, type] = {
    OracleUser.name: OracleUser,
    AdversarialUser.name: AdversarialUser,
    UniformUser.name: UniformUser,
}


def simulate(
    g: SessionGraph,
    handles: list[RecommenderHandle],
    user_model: UserModel,
    steps: int,
    rng: random.Random,
) -> ActionLog:
    """Roll the serve-and-choose loop ``steps`` times, logging every action.

    Fully deterministic for a given seeded rng: seed choice, algorithm
    assignment and user choice all draw from it in a fixed order.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if not handles:
        raise EmptyHandleListError("no recommender handles registered")
    ids = [h.algorithm_id for h in handles]
    if len(set(ids)) != len(ids):
        raise ValueError(f"algorithm ids must be unique, got {ids}")
    log = ActionLog()
    for _ in range(steps):
        seed = user_model.pick_seed(g, rng)
        handle = assign_algorithm(handles, rng)
        vector = handle(g, seed, rng)
        recommended = vector.objects()
        chosen = user_model.choose(g, seed, recommended, rng)
        log.append(ActionRecord(handle.algorithm_id, seed, recommended, chosen))
    return log


def baseline_random(
    g: SessionGraph, m: NodeId, k: int, rng: random.Random
) -> engine.RecommendationVector:
    """k distinct objects other than the seed, sampled uniformly.

    Scores are synthetic descending ranks (k..1) so the vector keeps its
    non-increasing-score invariant without imposing an id order.
    """
    if not g.has_object(m):
        raise UnknownObjectError(f"unknown object: {m}", [m])
    others = [obj for obj in g.object_ids() if obj != m]
    count = min(k, len(others))
    picks = rng.sample(others, count)
    entries = tuple((obj, count - i) for i, obj in enumerate(picks))
    return engine.RecommendationVector(seed=m, entries=entries)


def baseline_popularity(
    g: SessionGraph, m: NodeId, k: int | None = None
) -> engine.RecommendationVector:
    """Top objects by full-graph in-degree, same tie-break as the engine."""
    if not g.has_object(m):
        raise UnknownObjectError(f"unknown object: {m}", [m])
    scores = {obj: g.in_degree(obj) for obj in g.object_ids()}
    return engine.rank(scores, {m}, k, seed=m)


# -- action log persistence ---------------------------------------------

def write_action_log(log: ActionLog, path: Path | str) -> None:
    """Persist a log as CSV; the recommended column is a '|'-separated list."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LOG_HEADER)
        for record in log:
            for node in (record.seed_object, record.chosen, *record.recommended):
                if LIST_SEPARATOR in node.raw:
                    raise ValueError(
                        f"object id {node.raw!r} contains {LIST_SEPARATOR!r}, "
                        "which the log format reserves"
                    )
            writer.writerow(
                [
                    record.algorithm_id,
                    record.seed_object.raw,
                    LIST_SEPARATOR.join(obj.raw for obj in record.recommended),
                    record.chosen.raw,
                ]
            )


def read_action_log(path: Path | str) -> ActionLog:
    """Inverse of write_action_log; the round trip is loss-free."""
    log = ActionLog()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            recommended = tuple(
                object_id(raw)
                for raw in (row["recommended"] or "").split(LIST_SEPARATOR)
                if raw
            )
            log.append(
                ActionRecord(
                    algorithm_id=row["algorithm_id"],
                    seed_object=object_id(row["seed_object"]),
                    recommended=recommended,
                    chosen=object_id(row["chosen"]),
                )
            )
    return log
