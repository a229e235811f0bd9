"""Read-only HTTP facade over a single frozen session graph.

The graph is loaded once before serving; there are no mutation endpoints, so
request handling needs no locking and identical requests always produce
identical bodies. Errors use the envelope
``{"error": {"code": ..., "message": ...}}``.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import engine
from .errors import (
    MissingWeightsError,
    SessionRecError,
    UnknownObjectError,
)
from .graph import SessionGraph, object_id
from .ingest import ObjectCatalog


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "message": message}},
    )


def _parse_params(
    defaults: engine.RecommendParams,
    *,
    k=None,
    variant=None,
    scope=None,
    weights=None,
) -> engine.RecommendParams:
    """Merge request parameters over the configured defaults.

    Raises ValueError or MissingWeightsError on malformed input; callers map
    those to 400 responses.
    """
    if variant is None:
        parsed_variant = defaults.variant
    else:
        try:
            parsed_variant = engine.Variant(str(variant).replace("_", "-"))
        except ValueError:
            raise ValueError(f"unknown variant {variant!r}") from None
    if scope is None:
        parsed_scope = defaults.degree_scope
    else:
        try:
            parsed_scope = engine.DegreeScope(str(scope))
        except ValueError:
            raise ValueError(f"unknown scope {scope!r}") from None
    if weights is None:
        parsed_weights = defaults.weights
    elif isinstance(weights, str):
        parsed_weights = engine.ClassWeights.parse(weights)
    elif isinstance(weights, dict):
        parsed_weights = engine.ClassWeights(
            {str(cid): float(w) for cid, w in weights.items()}
        )
    else:
        raise ValueError("weights must be a mapping or a CLASS=NUMBER list")
    if k is None:
        parsed_k = defaults.k
    else:
        parsed_k = int(k)
    return engine.RecommendParams(
        variant=parsed_variant,
        degree_scope=parsed_scope,
        weights=parsed_weights,
        k=parsed_k,
    )


def _params_payload(params: engine.RecommendParams) -> dict:
    return {
        "variant": params.variant.value,
        "scope": params.degree_scope.value,
        "k": params.k,
        "weights": dict(params.weights.weights) if params.weights else None,
    }


def _entries_payload(
    vec: engine.RecommendationVector, catalog: ObjectCatalog | None
) -> list[dict]:
    entries = []
    for position, (obj, score) in enumerate(vec.entries, start=1):
        entry = {
            "rank": position,
            "object_id": obj.raw,
            "score": engine.normalize_score(score),
        }
        if catalog is not None:
            entry["name"] = catalog.name_of(obj) or ""
        entries.append(entry)
    return entries


def create_app(
    graph: SessionGraph | None = None,
    catalog: ObjectCatalog | None = None,
    defaults: engine.RecommendParams | None = None,
) -> FastAPI:
    """Build the service; pass ``graph=None`` to model a not-yet-loaded state."""
    app = FastAPI(title="sessionrec", docs_url=None, redoc_url=None)
    app.state.graph = graph
    app.state.catalog = catalog
    app.state.defaults = defaults or engine.RecommendParams()

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc))

    def _ready_graph() -> SessionGraph | None:
        g = app.state.graph
        if g is None or not g.frozen:
            return None
        return g

    @app.get("/health")
    def health():
        g = _ready_graph()
        if g is None:
            return _error(503, "graph_not_ready", "graph is still loading")
        return {"status": "ok", "valid": g.valid, "stats": g.stats().as_dict()}

    @app.get("/recommendations/{raw_object_id}")
    def recommendations(
        raw_object_id: str,
        k: int | None = None,
        variant: str | None = None,
        scope: str | None = None,
        weights: str | None = None,
    ):
        g = _ready_graph()
        if g is None:
            return _error(503, "graph_not_ready", "graph is still loading")
        try:
            params = _parse_params(
                app.state.defaults, k=k, variant=variant, scope=scope, weights=weights
            )
        except (ValueError, MissingWeightsError) as exc:
            return _error(400, "bad_params", str(exc))
        seed = object_id(raw_object_id)
        try:
            vec = engine.recommend(g, seed, params)
        except UnknownObjectError:
            return _error(404, "unknown_object", f"unknown object: {raw_object_id}")
        except SessionRecError as exc:
            return _error(400, "bad_params", str(exc))
        return {
            "seed": raw_object_id,
            "params": _params_payload(params),
            "entries": _entries_payload(vec, app.state.catalog),
        }

    @app.post("/recommendations/pathway")
    async def pathway(request: Request):
        g = _ready_graph()
        if g is None:
            return _error(503, "graph_not_ready", "graph is still loading")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        raw_objects = body.get("objects")
        if raw_objects is None or not isinstance(raw_objects, list):
            return _error(400, "bad_request", "body requires an 'objects' list")
        if not raw_objects:
            return _error(400, "empty_pathway", "pathway must not be empty")
        if not all(isinstance(o, str) and o for o in raw_objects):
            return _error(400, "bad_request", "object ids must be non-empty strings")
        try:
            params = _parse_params(
                app.state.defaults,
                k=body.get("k"),
                variant=body.get("variant"),
                scope=body.get("scope"),
                weights=body.get("weights"),
            )
        except (ValueError, MissingWeightsError) as exc:
            return _error(400, "bad_params", str(exc))
        seeds = [object_id(raw) for raw in raw_objects]
        try:
            vec = engine.recommend_pathway(g, seeds, params)
        except UnknownObjectError as exc:
            offenders = ", ".join(node.raw for node in exc.nodes)
            return _error(404, "unknown_object", f"unknown objects: {offenders}")
        except SessionRecError as exc:
            return _error(400, "bad_params", str(exc))
        return {
            "seed_pathway": list(raw_objects),
            "params": _params_payload(params),
            "entries": _entries_payload(vec, app.state.catalog),
        }

    return app
