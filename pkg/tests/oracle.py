"""Brute-force reference ranking, kept independent of the engine.

Operates on raw (class_id, kernel_raw, object_raw) rows, never on graph
queries: group rows into sessions, count how many sessions contain both the
seed and each other object, sort descending with ascending-id tie-break.
"""


def sessions_from_rows(rows):
    sessions = {}
    for class_id, kernel_raw, object_raw in rows:
        sessions.setdefault((class_id, kernel_raw), set()).add(object_raw)
    return sessions


def brute_force_scores(rows, seed_raw):
    scores = {}
    for members in sessions_from_rows(rows).values():
        if seed_raw in members:
            for object_raw in members:
                scores[object_raw] = scores.get(object_raw, 0) + 1
    return scores


def brute_force_vector(rows, seed_raw, k=None):
    """Expected [(object_raw, score), ...] for a base subgraph-scope run."""
    scores = brute_force_scores(rows, seed_raw)
    items = [(raw, s) for raw, s in scores.items() if raw != seed_raw and s > 0]
    items.sort(key=lambda item: (-item[1], item[0]))
    if k is not None:
        items = items[:k]
    return items
