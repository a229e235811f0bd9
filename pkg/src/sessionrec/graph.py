"""Bipartite session-graph data model.

A session graph links kernels (grouping nodes such as site visits, purchase
orders or wish lists) to objects (recommendable items) with directed
kernel -> object edges. Kernels are partitioned into classes by their
physical type, e.g. one class for visits and one for orders.

The graph has a two-phase lifecycle: it is built incrementally with
``add_edge`` and then sealed with ``freeze``. All queries require a frozen
graph; a frozen graph is immutable and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .errors import (
    ClassConflictError,
    DuplicateClassError,
    GraphFrozenError,
    GraphNotFrozenError,
    KindMismatchError,
    UnknownClassError,
    UnknownKernelError,
    UnknownObjectError,
)

#: Namespace shared by every object id. Kernel ids use their class id as
#: namespace, so a kernel and an object can never collide even when the raw
#: source ids are equal.
OBJECT_NAMESPACE = "obj"


class NodeKind(Enum):
    KERNEL = "kernel"
    OBJECT = "object"


@dataclass(frozen=True)
class NodeId:
    """Namespaced node identity.

    ``raw`` is the opaque source identifier (kept as a string so numeric ids
    from different tables stay distinguishable). Equality requires kind,
    namespace and raw to all match.
    """

    kind: NodeKind
    namespace: str
    raw: str

    def __post_init__(self):
        if not self.raw:
            raise ValueError("raw id must be non-empty")

    @property
    def sort_key(self) -> tuple[str, str]:
        return (self.namespace, self.raw)

    def __str__(self):
        return f"{self.namespace}:{self.raw}"


def object_id(raw: str) -> NodeId:
    """Build the NodeId of an object from its raw source id."""
    return NodeId(NodeKind.OBJECT, OBJECT_NAMESPACE, str(raw))


def kernel_id(class_id: str, raw: str) -> NodeId:
    """Build the NodeId of a kernel; the class id doubles as the namespace."""
    return NodeId(NodeKind.KERNEL, str(class_id), str(raw))


@dataclass(frozen=True)
class KernelClass:
    """A partition cell of the kernel set (visits, orders, experts, ...)."""

    class_id: str
    description: str = ""


@dataclass(frozen=True)
class Session:
    """One kernel together with every object it points at (a star subgraph)."""

    kernel: NodeId
    objects: frozenset[NodeId]


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class GraphStats:
    """Exact node and edge counts, broken down by kernel class."""

    object_count: int
    kernel_counts: dict[str, int]
    edge_counts: dict[str, int]

    @property
    def kernel_count(self) -> int:
        return sum(self.kernel_counts.values())

    @property
    def edge_count(self) -> int:
        return sum(self.edge_counts.values())

    def as_dict(self) -> dict:
        return {
            "objects": self.object_count,
            "kernel_count": self.kernel_count,
            "edge_count": self.edge_count,
            "kernels": dict(self.kernel_counts),
            "edges": dict(self.edge_counts),
        }


class SessionGraph:
    """Mutable-until-frozen bipartite graph of kernels and objects.

    Structural guarantees:

    * kernel and object id sets are disjoint by construction (the kind
      discriminant on NodeId);
    * every kernel belongs to exactly one declared class;
    * edges form a set, so re-adding an existing edge is a no-op;
    * after a clean freeze, every kernel has at least one outgoing edge and
      every object at least one incoming edge.
    """

    def __init__(self, classes: Iterable[KernelClass] = ()):
        self._classes: dict[str, KernelClass] = {}
        for cls in classes:
            if cls.class_id in self._classes:
                raise DuplicateClassError(f"class declared twice: {cls.class_id!r}")
            self._classes[cls.class_id] = cls
        self._kernel_class: dict[NodeId, str] = {}
        self._out: dict[NodeId, set[NodeId]] = {}
        self._in: dict[NodeId, set[NodeId]] = {}
        self._edge_count = 0
        self._frozen = False
        self._report: ValidationReport | None = None
        self._sorted_objects: tuple[NodeId, ...] = ()
        self._sorted_kernels: tuple[NodeId, ...] = ()

    # -- construction --------------------------------------------------

    def add_kernel(self, kernel: NodeId, class_id: str) -> None:
        """Pre-register a kernel without edges (it must gain one before freeze)."""
        self._check_mutable()
        self._check_kernel(kernel, class_id)
        self._out.setdefault(kernel, set())

    def add_object(self, obj: NodeId) -> None:
        """Pre-register an object without edges (it must gain one before freeze)."""
        self._check_mutable()
        if obj.kind is not NodeKind.OBJECT:
            raise KindMismatchError(f"not an object id: {obj}")
        self._in.setdefault(obj, set())

    def add_edge(self, kernel: NodeId, class_id: str, obj: NodeId) -> None:
        """Insert the directed edge kernel -> obj, registering both endpoints.

        The first sighting of a kernel fixes its class; addressing it under a
        different class later raises ClassConflictError because the class
        partition is global.
        """
        self._check_mutable()
        self._check_kernel(kernel, class_id)
        if obj.kind is not NodeKind.OBJECT:
            raise KindMismatchError(f"not an object id: {obj}")
        targets = self._out.setdefault(kernel, set())
        self._in.setdefault(obj, set())
        if obj in targets:
            return
        targets.add(obj)
        self._in[obj].add(kernel)
        self._edge_count += 1

    def _check_kernel(self, kernel: NodeId, class_id: str) -> None:
        if kernel.kind is not NodeKind.KERNEL:
            raise KindMismatchError(f"not a kernel id: {kernel}")
        if class_id not in self._classes:
            raise UnknownClassError(f"class not declared: {class_id!r}")
        if kernel.namespace != class_id:
            raise ClassConflictError(
                f"kernel {kernel} addressed under class {class_id!r}"
            )
        registered = self._kernel_class.setdefault(kernel, class_id)
        if registered != class_id:
            raise ClassConflictError(
                f"kernel {kernel} already registered in class {registered!r}"
            )

    def _check_mutable(self) -> None:
        if self._frozen:
            raise GraphFrozenError("graph is frozen")

    # -- lifecycle ------------------------------------------------------

    def freeze(self) -> ValidationReport:
        """Seal the graph and report structural violations.

        Violations are reported, not raised; the graph becomes immutable
        either way. Freezing twice returns the same report.
        """
        if self._frozen:
            assert self._report is not None
            return self._report
        violations = []
        for kernel, targets in self._out.items():
            if not targets:
                violations.append(
                    Violation("isolated_kernel", str(kernel), "kernel has no objects")
                )
            if self._kernel_class.get(kernel) not in self._classes:
                violations.append(
                    Violation("undeclared_class", str(kernel), "kernel class not declared")
                )
        for obj, sources in self._in.items():
            if not sources:
                violations.append(
                    Violation("isolated_object", str(obj), "object has no sessions")
                )
        self._out = {k: frozenset(v) for k, v in self._out.items()}
        self._in = {o: frozenset(v) for o, v in self._in.items()}
        self._sorted_objects = tuple(sorted(self._in, key=lambda n: n.sort_key))
        self._sorted_kernels = tuple(sorted(self._out, key=lambda n: n.sort_key))
        self._report = ValidationReport(tuple(violations))
        self._frozen = True
        return self._report

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def valid(self) -> bool:
        """True once the graph is frozen with a clean validation report."""
        return self._frozen and self._report is not None and self._report.valid

    @property
    def validation_report(self) -> ValidationReport | None:
        return self._report

    # -- queries (frozen graph only) -------------------------------------

    def kernels_of(self, obj: NodeId) -> frozenset[NodeId]:
        """All kernels holding an edge to ``obj`` (its in-neighborhood)."""
        self._check_frozen()
        try:
            return self._in[obj]
        except KeyError:
            raise UnknownObjectError(f"unknown object: {obj}", [obj]) from None

    def objects_of(self, kernel: NodeId) -> Session:
        """The session of ``kernel``: the kernel plus its out-neighborhood."""
        self._check_frozen()
        try:
            return Session(kernel, self._out[kernel])
        except KeyError:
            raise UnknownKernelError(f"unknown kernel: {kernel}", [kernel]) from None

    def in_degree(self, obj: NodeId) -> int:
        return len(self.kernels_of(obj))

    def out_degree(self, kernel: NodeId) -> int:
        return len(self.objects_of(kernel).objects)

    def class_of(self, kernel: NodeId) -> str:
        self._check_frozen()
        try:
            return self._kernel_class[kernel]
        except KeyError:
            raise UnknownKernelError(f"unknown kernel: {kernel}", [kernel]) from None

    def has_object(self, obj: NodeId) -> bool:
        return obj in self._in

    def has_kernel(self, kernel: NodeId) -> bool:
        return kernel in self._out

    def has_edge(self, kernel: NodeId, obj: NodeId) -> bool:
        return obj in self._out.get(kernel, ())

    def object_ids(self) -> tuple[NodeId, ...]:
        """All objects in deterministic (namespace, raw) order."""
        self._check_frozen()
        return self._sorted_objects

    def kernel_ids(self) -> tuple[NodeId, ...]:
        """All kernels in deterministic (namespace, raw) order."""
        self._check_frozen()
        return self._sorted_kernels

    def edges(self) -> Iterable[tuple[NodeId, NodeId]]:
        """All edges, ordered by (kernel, object) sort keys."""
        self._check_frozen()
        for kernel in self._sorted_kernels:
            for obj in sorted(self._out[kernel], key=lambda n: n.sort_key):
                yield kernel, obj

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def declared_classes(self) -> tuple[KernelClass, ...]:
        return tuple(sorted(self._classes.values(), key=lambda c: c.class_id))

    def stats(self) -> GraphStats:
        self._check_frozen()
        kernel_counts = {cid: 0 for cid in self._classes}
        edge_counts = {cid: 0 for cid in self._classes}
        for kernel, targets in self._out.items():
            cid = self._kernel_class[kernel]
            kernel_counts[cid] += 1
            edge_counts[cid] += len(targets)
        return GraphStats(len(self._in), kernel_counts, edge_counts)

    def _check_frozen(self) -> None:
        if not self._frozen:
            raise GraphNotFrozenError("graph must be frozen before querying")
