"""Synthetic session-graph generators for tests, benchmarks and experiments.

Both generators are deterministic for a given seeded ``random.Random`` and
always produce structurally valid graphs (every kernel covers at least one
object, every object is covered).
"""
from __future__ import annotations

import random

from .graph import KernelClass, SessionGraph, kernel_id, object_id

#: (class_id, kernel_raw, object_raw) rows, the ground truth tests feed to
#: independent oracles without going through graph queries.
Row = tuple[str, str, str]


def build_graph(rows: list[Row], class_ids: list[str]) -> SessionGraph:
    """Assemble and freeze a graph from raw session rows."""
    g = SessionGraph([KernelClass(cid) for cid in class_ids])
    for class_id, kernel_raw, object_raw in rows:
        g.add_edge(kernel_id(class_id, kernel_raw), class_id, object_id(object_raw))
    g.freeze()
    return g


def random_session_rows(
    rng: random.Random,
    *,
    max_objects: int = 200,
    max_kernels: int = 300,
    class_ids: tuple[str, ...] = ("K1", "K2"),
    max_session_size: int = 6,
) -> tuple[list[Row], list[str]]:
    """Random mixed-class session rows with every object covered.

    Returns the rows plus the class id list needed to rebuild the graph.
    """
    n_objects = rng.randint(2, max_objects)
    n_kernels = rng.randint(1, max_kernels)
    objects = [str(i) for i in range(1, n_objects + 1)]
    rows: list[Row] = []
    covered: set[str] = set()
    for kernel_index in range(1, n_kernels + 1):
        class_id = class_ids[rng.randrange(len(class_ids))]
        size = rng.randint(1, min(max_session_size, n_objects))
        for obj in rng.sample(objects, size):
            rows.append((class_id, str(kernel_index), obj))
            covered.add(obj)
    # attach uncovered objects to filler sessions so the frozen graph is valid
    for obj in objects:
        if obj not in covered:
            kernel_index = rng.randint(1, n_kernels)
            class_id = class_ids[rng.randrange(len(class_ids))]
            rows.append((class_id, f"fill-{kernel_index}", obj))
    return rows, list(class_ids)


def bipartite_rows(
    rng: random.Random,
    n_objects: int,
    kernels_per_class: dict[str, int],
    edges_per_class: dict[str, int],
) -> tuple[list[Row], list[str]]:
    """Rows hitting exact per-class kernel and edge counts.

    Three passes: give every kernel one object, cover every object still
    missing an edge, then fill the remaining per-class budget with rejection
    sampling over (kernel, object) pairs.
    """
    for cid, n_edges in edges_per_class.items():
        n_kernels = kernels_per_class[cid]
        if n_edges < n_kernels:
            raise ValueError(
                f"class {cid!r}: {n_edges} edges cannot cover {n_kernels} kernels"
            )
    if sum(edges_per_class.values()) < n_objects:
        raise ValueError("not enough edges to cover every object")

    objects = [str(i) for i in range(1, n_objects + 1)]
    rows: list[Row] = []
    seen: set[tuple[str, str, str]] = set()
    remaining: dict[str, int] = {}
    uncovered = set(objects)

    def add(class_id: str, kernel_raw: str, object_raw: str) -> bool:
        key = (class_id, kernel_raw, object_raw)
        if key in seen:
            return False
        seen.add(key)
        rows.append(key)
        uncovered.discard(object_raw)
        return True

    for cid, n_kernels in kernels_per_class.items():
        for i in range(1, n_kernels + 1):
            add(cid, str(i), objects[rng.randrange(n_objects)])
        remaining[cid] = edges_per_class[cid] - n_kernels

    for obj in sorted(uncovered, key=int):
        cid = max(remaining, key=lambda c: remaining[c])
        if remaining[cid] <= 0:
            raise ValueError("edge budget exhausted before covering all objects")
        while True:
            kernel_raw = str(rng.randint(1, kernels_per_class[cid]))
            if add(cid, kernel_raw, obj):
                break
        remaining[cid] -= 1

    for cid in sorted(remaining):
        n_kernels = kernels_per_class[cid]
        while remaining[cid] > 0:
            kernel_raw = str(rng.randint(1, n_kernels))
            object_raw = objects[rng.randrange(n_objects)]
            if add(cid, kernel_raw, object_raw):
                remaining[cid] -= 1
    return rows, sorted(kernels_per_class)
