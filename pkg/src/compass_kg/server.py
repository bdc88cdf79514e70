"""HTTP API over an immutable store snapshot.

The store is loaded once at startup; /reload swaps in a freshly loaded
snapshot atomically, so in-flight requests keep reading the snapshot they
started with. All handlers are read-only. Payload terms carry both the full
IRI and a prefixed rendering so clients need no prefix table of their own.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .competency import (
    ServiceMatch,
    UnknownEntityError,
    alternative_services,
    eligibility_and_barriers,
    gaps_and_duplicates,
    list_services,
    priority_demographics,
    privacy_requirements,
    service_duration_detail,
    services_matching_needs,
)
from .namespaces import RDFS_LABEL, cids, cp, expand_name, iso5087, shrink_iri
from .ontology import Schema, TypeIndex, build_compass_schema
from .query import QueryError, UnsupportedFeatureError, evaluate, parse_query
from .store import Term, TripleStore, iri
from .turtle import TurtleParseError


@dataclass
class Snapshot:
    store: TripleStore
    schema: Schema
    path: str | None = None


class ApiError(Exception):
    """Caller-visible failure: status is 4xx for caller faults."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _load_snapshot(path: str) -> Snapshot:
    store = TripleStore()
    store.load_text(Path(path).read_text(encoding="utf-8"))
    return Snapshot(store, build_compass_schema(), path)


def term_json(term: Term | None, prefixes=None) -> dict | None:
    if term is None:
        return None
    if term.is_iri:
        return {"type": "iri", "value": term.value, "prefixed": shrink_iri(term.value, prefixes)}
    if term.is_blank:
        return {"type": "blank", "value": term.value}
    return {"type": "literal", "value": term.value, "datatype": term.datatype}


def label_of(store: TripleStore, term: Term) -> str | None:
    value = store.value(term, iri(RDFS_LABEL))
    return value.value if value is not None and value.is_literal else None


def match_json(store: TripleStore, match: ServiceMatch) -> dict:
    requirements = []
    for req in store.objects(match.service, iri(cp("hasRequirement"))):
        requirements.append(
            {
                "characteristic": term_json(req, store.prefixes),
                "label": label_of(store, req),
            }
        )
    return {
        "service": term_json(match.service, store.prefixes),
        "label": label_of(store, match.service),
        "codes": [term_json(c, store.prefixes) for c in sorted(match.codes, key=lambda t: t.value)],
        "matchedSatisfiers": [
            term_json(s, store.prefixes)
            for s in sorted(match.matched_satisfiers, key=lambda t: t.value)
        ],
        "requirements": requirements,
    }


def barrier_json(store: TripleStore, barrier) -> dict:
    return {
        "client": term_json(barrier.client, store.prefixes),
        "service": term_json(barrier.service, store.prefixes),
        "unmetCharacteristic": term_json(barrier.unmet_characteristic, store.prefixes),
        "unmetLabel": label_of(store, barrier.unmet_characteristic),
        "removalServiceType": term_json(barrier.removal_service_type, store.prefixes),
    }


def demographics_json(store: TripleStore, rows) -> list[dict]:
    return [
        {
            "location": term_json(r.location, store.prefixes),
            "stakeholder": term_json(r.stakeholder, store.prefixes),
            "stakeholderLabel": label_of(store, r.stakeholder),
            "serviceCode": term_json(r.service_code, store.prefixes),
            "count": r.count,
        }
        for r in rows
    ]


def coverage_json(store: TripleStore, report) -> dict:
    return {
        "gaps": [
            {
                "location": term_json(g.location, store.prefixes),
                "satisfier": term_json(g.satisfier, store.prefixes),
                "demandingClients": g.demanding_clients,
            }
            for g in report.gaps
        ],
        "duplicates": [
            {
                "location": term_json(d.location, store.prefixes),
                "serviceCode": term_json(d.service_code, store.prefixes),
                "services": [
                    term_json(svc, store.prefixes)
                    for svc in sorted(d.services, key=lambda t: t.value)
                ],
            }
            for d in report.duplicates
        ],
    }


class QueryBody(BaseModel):
    query: str


def create_app(data_path: str | None = None, store: TripleStore | None = None) -> FastAPI:
    """Build the API app from a data file path or an existing store."""
    app = FastAPI(title="compass-kg", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    if store is not None:
        snapshot = Snapshot(store, build_compass_schema(), data_path)
    elif data_path:
        snapshot = _load_snapshot(data_path)
    else:
        raise ValueError("create_app needs a data path or a store")
    app.state.snapshot = snapshot
    app.state.reload_lock = threading.Lock()

    def snap() -> Snapshot:
        return app.state.snapshot

    def resolve(name: str) -> Term:
        try:
            return iri(expand_name(name, snap().store.prefixes))
        except (KeyError, ValueError) as exc:
            raise ApiError(400, "bad-iri", str(exc))

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(UnknownEntityError)
    async def _unknown(request: Request, exc: UnknownEntityError):
        return JSONResponse(
            status_code=404, content={"status": 404, "code": exc.code, "message": str(exc)}
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "triples": len(snap().store)}

    @app.post("/reload")
    def reload():
        current = snap()
        if not current.path:
            raise ApiError(400, "no-data-path", "server was started from an in-memory store")
        with app.state.reload_lock:
            try:
                app.state.snapshot = _load_snapshot(current.path)
            except (OSError, TurtleParseError) as exc:
                raise ApiError(400, "reload-failed", str(exc))
        return {"triples": len(snap().store)}

    @app.post("/query")
    def run_query(body: QueryBody):
        s = snap()
        try:
            ast = parse_query(body.query, s.store.prefixes)
        except UnsupportedFeatureError as exc:
            raise ApiError(400, "unsupported-feature", str(exc))
        except QueryError as exc:
            raise ApiError(400, "bad-query", str(exc))
        table = evaluate(s.store, s.schema, ast)
        return {
            "columns": list(table.columns),
            "rows": [[term_json(cell, s.store.prefixes) for cell in row] for row in table.rows],
        }

    @app.get("/services")
    def services(
        codeClass: str | None = None,
        location: str | None = None,
        limit: int = Query(100, ge=1, le=1000),
        offset: int = Query(0, ge=0),
    ):
        s = snap()
        matches = list_services(
            s.store,
            s.schema,
            resolve(codeClass) if codeClass else None,
            resolve(location) if location else None,
        )
        page = matches[offset : offset + limit]
        return {
            "total": len(matches),
            "services": [match_json(s.store, m) for m in page],
            "taxonomy": _taxonomy_payload(s),
            "locations": _locations_payload(s),
            "satisfiers": _satisfiers_payload(s),
        }

    def _taxonomy_payload(s: Snapshot):
        types = TypeIndex(s.store, s.schema, closure=False)
        code_root = cids("Code")
        classes = []
        codes = []
        for class_iri in sorted(s.schema.classes):
            if not s.schema.is_subclass(class_iri, code_root) or class_iri == code_root:
                continue
            instances = types.instances_of(iri(class_iri))
            classes.append(
                {
                    "iri": class_iri,
                    "prefixed": shrink_iri(class_iri, s.store.prefixes),
                    "instances": len(instances),
                }
            )
            for inst in sorted(instances, key=lambda t: t.value):
                codes.append(
                    {
                        "code": term_json(inst, s.store.prefixes),
                        "codeClass": shrink_iri(class_iri, s.store.prefixes),
                        "label": label_of(s.store, inst),
                    }
                )
        return {"classes": classes, "codes": codes}

    def _locations_payload(s: Snapshot):
        types = TypeIndex(s.store, s.schema, closure=True)
        out = []
        for loc in sorted(
            types.instances_of(iri(iso5087("CityDivision"))), key=lambda t: t.value
        ):
            out.append({"location": term_json(loc, s.store.prefixes), "label": label_of(s.store, loc)})
        return out

    def _satisfiers_payload(s: Snapshot):
        types = TypeIndex(s.store, s.schema, closure=True)
        out = []
        for ns in sorted(types.instances_of(iri(cp("NeedSatisfier"))), key=lambda t: t.value):
            out.append({"satisfier": term_json(ns, s.store.prefixes), "label": label_of(s.store, ns)})
        return out

    @app.get("/clients/{client}/matches")
    def client_matches(client: str):
        s = snap()
        node = resolve(client)
        matches = services_matching_needs(s.store, s.schema, node)
        return {
            "client": term_json(node, s.store.prefixes),
            "matches": [match_json(s.store, m) for m in matches],
        }

    @app.get("/clients/{client}/eligibility")
    def client_eligibility(client: str):
        s = snap()
        node = resolve(client)
        eligible, barriers = eligibility_and_barriers(s.store, s.schema, node)
        return {
            "client": term_json(node, s.store.prefixes),
            "eligible": [match_json(s.store, m) for m in eligible],
            "barriers": [barrier_json(s.store, b) for b in barriers],
        }

    @app.get("/services/{service}/privacy")
    def service_privacy(service: str):
        s = snap()
        node = resolve(service)
        codes = privacy_requirements(s.store, s.schema, node)
        return {
            "service": term_json(node, s.store.prefixes),
            "codes": [
                {"code": term_json(c, s.store.prefixes), "label": label_of(s.store, c)}
                for c in codes
            ],
        }

    @app.get("/clients/{client}/duration")
    def client_duration(client: str, code: str):
        s = snap()
        node = resolve(client)
        report = service_duration_detail(s.store, s.schema, node, resolve(code))
        return {
            "client": term_json(node, s.store.prefixes),
            "code": term_json(resolve(code), s.store.prefixes),
            "weeks": report.weeks,
            "spans": [
                {"event": term_json(ev, s.store.prefixes), "weeks": w} for ev, w in report.spans
            ],
            "skippedEvents": [term_json(ev, s.store.prefixes) for ev in report.skipped_events],
        }

    @app.get("/coverage/demographics")
    def coverage_demographics(
        limit: int = Query(100, ge=1, le=1000), offset: int = Query(0, ge=0)
    ):
        s = snap()
        rows = priority_demographics(s.store, s.schema)
        return {
            "total": len(rows),
            "rows": demographics_json(s.store, rows[offset : offset + limit]),
        }

    @app.get("/coverage/gaps")
    def coverage_gaps():
        s = snap()
        return coverage_json(s.store, gaps_and_duplicates(s.store, s.schema))

    @app.get("/alternatives")
    def alternatives(satisfier: str, profile: str, exclude: str = ""):
        s = snap()
        excluded = {resolve(e.strip()) for e in exclude.split(",") if e.strip()}
        matches = alternative_services(
            s.store, s.schema, resolve(satisfier), resolve(profile), excluded
        )
        return {"services": [match_json(s.store, m) for m in matches]}

    _mount_ui(app)
    return app


def _mount_ui(app: FastAPI):
    """Serve built explorer assets at /ui when a dist directory is around."""
    candidates = []
    if os.environ.get("COMPASS_UI_DIR"):
        candidates.append(Path(os.environ["COMPASS_UI_DIR"]))
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    candidates.append(Path.cwd() / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/ui", StaticFiles(directory=str(cand), html=True), name="ui")
            return


def serve(data_path: str, port: int, host: str = "127.0.0.1") -> None:
    """Blocking server run; load failures abort before binding."""
    import uvicorn

    app = create_app(data_path)
    uvicorn.run(app, host=host, port=port, log_level="warning")
