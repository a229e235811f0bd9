import pytest

from sessionrec import KernelClass, SessionGraph, kernel_id, object_id

# Small two-class fixture used throughout: three visit sessions and one
# order session over five objects.
#   j1 -> {a, b}   j2 -> {a, b}   j3 -> {a, c}   (class K1)
#   j4 -> {d, e}                                 (class K2)
F1_CLASSES = ["K1", "K2"]
F1_EDGES = [
    ("K1", "j1", "a"),
    ("K1", "j1", "b"),
    ("K1", "j2", "a"),
    ("K1", "j2", "b"),
    ("K1", "j3", "a"),
    ("K1", "j3", "c"),
    ("K2", "j4", "d"),
    ("K2", "j4", "e"),
]

# Single-class completion of the nine-object, six-kernel walkthrough graph:
# seed o3 sits in sessions j2, j4 and j5, whose objects are exactly o2..o9.
WORKED_CLASSES = ["K1"]
WORKED_EDGES = [
    ("K1", "j1", "o1"),
    ("K1", "j1", "o2"),
    ("K1", "j1", "o5"),
    ("K1", "j2", "o3"),
    ("K1", "j2", "o4"),
    ("K1", "j2", "o5"),
    ("K1", "j2", "o9"),
    ("K1", "j3", "o8"),
    ("K1", "j4", "o2"),
    ("K1", "j4", "o3"),
    ("K1", "j4", "o6"),
    ("K1", "j4", "o7"),
    ("K1", "j5", "o2"),
    ("K1", "j5", "o3"),
    ("K1", "j5", "o8"),
    ("K1", "j6", "o1"),
    ("K1", "j6", "o4"),
]


def make_graph(classes, edges) -> SessionGraph:
    g = SessionGraph([KernelClass(cid) for cid in classes])
    for class_id, kernel_raw, object_raw in edges:
        g.add_edge(kernel_id(class_id, kernel_raw), class_id, object_id(object_raw))
    g.freeze()
    return g


@pytest.fixture
def f1_graph():
    return make_graph(F1_CLASSES, F1_EDGES)


@pytest.fixture
def worked_graph():
    return make_graph(WORKED_CLASSES, WORKED_EDGES)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(cell) for cell in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def f1_files(tmp_path):
    """F1 as two on-disk edge CSVs, one per class."""
    visits = write_csv(
        tmp_path / "visits.csv",
        ["kernel_id", "object_id"],
        [(k, o) for c, k, o in F1_EDGES if c == "K1"],
    )
    orders = write_csv(
        tmp_path / "orders.csv",
        ["kernel_id", "object_id"],
        [(k, o) for c, k, o in F1_EDGES if c == "K2"],
    )
    return [f"K1:{visits}", f"K2:{orders}"]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome, mark in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in getattr(report, "nodeid", ""):
                if getattr(report, "when", "call") == "call" or outcome == "error":
                    rows.append((report.nodeid.split("::")[-1], mark))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, mark in sorted(rows):
            terminalreporter.write_line(f"{mark}  {name}")
