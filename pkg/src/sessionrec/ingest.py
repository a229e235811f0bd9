"""CSV ingestion and export.

Edge files are relational exports with one row per (kernel, object) event,
e.g. visit rows ``phpsesid -> idprodukt`` or order-item rows
``purchaseorderid -> productid``. Column names are explicit configuration per
file, so the same loader serves every kernel class. Dirty rows are rejected
and reported rather than aborting the load; ``strict=True`` turns the first
rejection into an error.
"""
from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass, field
from pathlib import Path

from .engine import RecommendationVector, normalize_score
from .errors import MissingColumnError, RowRejectedError
from .graph import NodeId, SessionGraph, kernel_id, object_id

DEFAULT_KERNEL_COLUMN = "kernel_id"
DEFAULT_OBJECT_COLUMN = "object_id"


@dataclass(frozen=True)
class EdgeFileSpec:
    """Where one class of session edges lives and how its columns are named."""

    path: Path | str
    class_id: str
    kernel_column: str = DEFAULT_KERNEL_COLUMN
    object_column: str = DEFAULT_OBJECT_COLUMN

    def __post_init__(self):
        if self.kernel_column == self.object_column:
            raise ValueError("kernel_column and object_column must differ")


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str


@dataclass
class IngestReport:
    """Per-file accounting: rows_read = edges_added + duplicates + filtered + rejected."""

    path: str
    class_id: str
    rows_read: int = 0
    edges_added: int = 0
    duplicates: int = 0
    filtered: int = 0
    rejected: list[RejectedRow] = field(default_factory=list)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)


@dataclass
class ObjectCatalog:
    """Display names for objects; may cover ids absent from the graph."""

    names: dict[NodeId, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def name_of(self, obj: NodeId) -> str | None:
        return self.names.get(obj)

    def __len__(self):
        return len(self.names)


def load_edges(
    spec: EdgeFileSpec,
    g: SessionGraph,
    *,
    date_from: datetime.date | None = None,
    date_to: datetime.date | None = None,
    date_column: str = "data",
    strict: bool = False,
) -> IngestReport:
    """Add one edge per data row of ``spec.path`` to the (unfrozen) graph.

    With a date window set, rows whose ``date_column`` falls outside
    [date_from, date_to] are skipped and counted as filtered.
    """
    report = IngestReport(path=str(spec.path), class_id=spec.class_id)
    filtering = date_from is not None or date_to is not None
    with open(spec.path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in (spec.kernel_column, spec.object_column):
            if column not in header:
                raise MissingColumnError(
                    f"{spec.path}: missing column {column!r} (header: {header})"
                )
        if filtering and date_column not in header:
            raise MissingColumnError(
                f"{spec.path}: missing date column {date_column!r} needed for filtering"
            )
        for row in reader:
            report.rows_read += 1
            line = reader.line_num
            kernel_raw = (row.get(spec.kernel_column) or "").strip()
            object_raw = (row.get(spec.object_column) or "").strip()
            if not kernel_raw or not object_raw:
                _reject(report, line, "empty kernel or object id", strict)
                continue
            if filtering:
                date_raw = (row.get(date_column) or "").strip()
                try:
                    date = datetime.date.fromisoformat(date_raw)
                except ValueError:
                    _reject(report, line, f"bad date {date_raw!r}", strict)
                    continue
                if (date_from and date < date_from) or (date_to and date > date_to):
                    report.filtered += 1
                    continue
            kernel = kernel_id(spec.class_id, kernel_raw)
            obj = object_id(object_raw)
            if g.has_edge(kernel, obj):
                report.duplicates += 1
                continue
            g.add_edge(kernel, spec.class_id, obj)
            report.edges_added += 1
    return report


def _reject(report: IngestReport, line: int, reason: str, strict: bool) -> None:
    if strict:
        raise RowRejectedError(line, reason)
    report.rejected.append(RejectedRow(line, reason))


def load_catalog(
    path: Path | str,
    *,
    id_column: str = "object_id",
    name_column: str = "name",
) -> ObjectCatalog:
    """Read an object-id to display-name map; later duplicate rows win."""
    catalog = ObjectCatalog()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in (id_column, name_column):
            if column not in header:
                raise MissingColumnError(
                    f"{path}: missing column {column!r} (header: {header})"
                )
        for row in reader:
            raw = (row.get(id_column) or "").strip()
            if not raw:
                continue
            obj = object_id(raw)
            if obj in catalog.names:
                catalog.warnings.append(
                    f"line {reader.line_num}: duplicate id {raw!r}, later name wins"
                )
            catalog.names[obj] = row.get(name_column) or ""
    return catalog


def export_vector(
    vec: RecommendationVector,
    catalog: ObjectCatalog | None,
    path: Path | str,
) -> None:
    """Write a recommendation vector as ``rank,object_id,score[,name]`` CSV.

    Ranks start at 1 and follow vector order; the name column appears only
    when a catalog is given, empty for unknown ids. Integral scores are
    written without a decimal point so unit-weight runs match unweighted ones
    byte for byte.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["rank", "object_id", "score"]
        if catalog is not None:
            header.append("name")
        writer.writerow(header)
        for position, (obj, score) in enumerate(vec.entries, start=1):
            row = [position, obj.raw, normalize_score(score)]
            if catalog is not None:
                row.append(catalog.name_of(obj) or "")
            writer.writerow(row)


def export_edges(
    g: SessionGraph,
    path: Path | str,
    class_id: str,
    *,
    kernel_column: str = DEFAULT_KERNEL_COLUMN,
    object_column: str = DEFAULT_OBJECT_COLUMN,
) -> int:
    """Dump every edge of one kernel class as an ingestible CSV.

    Returns the number of rows written. Re-ingesting the dumps of each class
    rebuilds a graph with identical stats and recommendations.
    """
    written = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([kernel_column, object_column])
        for kernel, obj in g.edges():
            if kernel.namespace != class_id:
                continue
            writer.writerow([kernel.raw, obj.raw])
            written += 1
    return written
