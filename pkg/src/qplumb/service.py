"""HTTP service exposing the stage registry for interactive front ends.

Local-first: binds loopback by default.  Handlers are thin adapters over
:mod:`qplumb.pipeline`; per-session mutations are serialized by a lock
while pipeline computation runs on immutable values, so concurrent
sessions never contend.

API (JSON bodies):

* ``GET  /v1/health``
* ``GET  /v1/ops`` -- stage names + parameter schemas
* ``POST /v1/pipeline`` ``{stages: [{name, params}], input: [lines]}``
* ``POST /v1/session`` -> ``{id}``
* ``POST /v1/session/{id}/apply`` ``{stage: {name, params}}``
* ``POST /v1/session/{id}/undo`` | ``/redo``
* ``GET  /v1/session/{id}/circuit`` | ``/layout`` | ``/report`` | ``/history``
* ``GET  /v1/session/{id}/download/{artifact}``
"""
from __future__ import annotations

import hashlib
import json
import re
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .errors import NotFound, QPlumbError, StageError
from .pipeline import REGISTRY, PipelineStage, run_pipeline, run_stage


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class _Snapshot:
    circuit: str | None = None  # canonical .qlist text
    layout: str | None = None  # layout document
    report: str | None = None  # report document

    def digest(self) -> str:
        return _digest(json.dumps([self.circuit, self.layout, self.report]))


@dataclass
class SessionState:
    """Undo/redo over content-addressed snapshots.

    `history` is an append-only audit log; `timeline` + `cursor` hold the
    linear undo state (o(1) swaps between stored snapshots).
    """

    id: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    timeline: list[_Snapshot] = field(default_factory=lambda: [_Snapshot()])
    cursor: int = 0
    history: list[dict] = field(default_factory=list)

    @property
    def current(self) -> _Snapshot:
        return self.timeline[self.cursor]

    def apply(self, stage: PipelineStage) -> _Snapshot:
        snap = self.current
        input_lines = snap.circuit.splitlines() if snap.circuit else []
        output = run_stage_checked(stage, input_lines)
        text = "\n".join(output)
        new = _Snapshot(snap.circuit, snap.layout, snap.report)
        spec = REGISTRY[stage.name]
        if spec.kind == "transformation" or stage.name in (
            "analyze.availability",
            "analyze.enforce",
        ):
            new.circuit = text
        elif stage.name == "layout.build":
            new.layout = text
        else:
            new.report = text
        del self.timeline[self.cursor + 1 :]
        self.timeline.append(new)
        self.cursor += 1
        self.history.append(
            {
                "stage": stage.name,
                "params": dict(stage.params),
                "input_digest": snap.digest(),
                "output_digest": new.digest(),
            }
        )
        return new

    def undo(self) -> _Snapshot:
        if self.cursor == 0:
            raise NotFound("nothing to undo")
        self.cursor -= 1
        self.history.append({"stage": "undo", "output_digest": self.current.digest()})
        return self.current

    def redo(self) -> _Snapshot:
        if self.cursor + 1 >= len(self.timeline):
            raise NotFound("nothing to redo")
        self.cursor += 1
        self.history.append({"stage": "redo", "output_digest": self.current.digest()})
        return self.current

    def summary(self) -> dict:
        snap = self.current
        return {
            "id": self.id,
            "digest": snap.digest(),
            "has_circuit": snap.circuit is not None,
            "has_layout": snap.layout is not None,
            "has_report": snap.report is not None,
            "undo_depth": self.cursor,
            "redo_depth": len(self.timeline) - self.cursor - 1,
        }


def run_stage_checked(stage: PipelineStage, lines: list[str]) -> list[str]:
    try:
        return run_stage(stage, lines)
    except QPlumbError:
        raise
    except Exception as err:  # defensive: surface as a typed error
        raise QPlumbError(str(err)) from err


class _Sessions:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionState] = {}

    def create(self) -> SessionState:
        session = SessionState(id=uuid.uuid4().hex[:12])
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> SessionState:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise NotFound(f"unknown session {session_id!r}")
        return session


_ROUTES = [
    ("GET", re.compile(r"^/v1/health$")),
    ("GET", re.compile(r"^/v1/ops$")),
    ("POST", re.compile(r"^/v1/pipeline$")),
    ("POST", re.compile(r"^/v1/session$")),
    ("POST", re.compile(r"^/v1/session/(?P<sid>\w+)/(?P<verb>apply|undo|redo)$")),
    ("GET", re.compile(r"^/v1/session/(?P<sid>\w+)/(?P<artifact>circuit|layout|report|history)$")),
    ("GET", re.compile(r"^/v1/session/(?P<sid>\w+)/download/(?P<artifact>circuit|layout|report)$")),
]


def make_server(host: str = "127.0.0.1", port: int = 8720) -> ThreadingHTTPServer:
    sessions = _Sessions()

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt: str, *args) -> None:  # quiet by default
            pass

        def _send(self, status: int, payload: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(payload)

        def _json(self, status: int, doc: dict | list) -> None:
            body = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
            self._send(status, body, "application/json")

        def _error(self, status: int, err: Exception) -> None:
            self._json(
                status,
                {"error": {"type": type(err).__name__, "message": str(err)}},
            )

        def _body(self) -> dict:
            if not self._raw_body:
                return {}
            try:
                doc = json.loads(self._raw_body)
            except json.JSONDecodeError as err:
                raise QPlumbError(f"bad JSON body: {err}") from None
            if not isinstance(doc, dict):
                raise QPlumbError("JSON body must be an object")
            return doc

        def _drain_body(self) -> None:
            # keep-alive correctness: consume the body whether or not the
            # route needs it, or leftovers corrupt the next request
            length = int(self.headers.get("Content-Length") or 0)
            self._raw_body = self.rfile.read(length) if length else b""

        def do_OPTIONS(self) -> None:
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self) -> None:
            self._dispatch("GET")

        def do_POST(self) -> None:
            self._dispatch("POST")

        def _dispatch(self, method: str) -> None:
            try:
                self._drain_body()
                self._route(method)
            except NotFound as err:
                self._error(404, err)
            except StageError as err:
                self._json(
                    422,
                    {
                        "error": {
                            "type": type(err.cause).__name__,
                            "message": str(err),
                            "stage_index": err.stage_index,
                            "stage": err.stage_name,
                        }
                    },
                )
            except QPlumbError as err:
                self._error(422, err)
            except Exception as err:  # pragma: no cover
                self._error(500, err)

        def _route(self, method: str) -> None:
            path = self.path.split("?", 1)[0]
            for verb, pattern in _ROUTES:
                match = pattern.match(path)
                if match and verb == method:
                    self._handle(path, match.groupdict())
                    return
            raise NotFound(f"no route for {method} {path}")

        def _handle(self, path: str, groups: dict[str, str]) -> None:
            if path == "/v1/health":
                self._json(200, {"status": "ok"})
            elif path == "/v1/ops":
                self._json(
                    200,
                    {"ops": [REGISTRY[name].to_dict() for name in sorted(REGISTRY)]},
                )
            elif path == "/v1/pipeline":
                body = self._body()
                stages = [
                    PipelineStage(s["name"], dict(s.get("params", {})))
                    for s in body.get("stages", [])
                ]
                output = run_pipeline(stages, list(body.get("input", [])))
                self._json(200, {"output": output})
            elif path == "/v1/session":
                session = sessions.create()
                self._json(200, {"id": session.id})
            elif "verb" in groups:
                session = sessions.get(groups["sid"])
                with session.lock:
                    if groups["verb"] == "apply":
                        body = self._body()
                        stage_doc = body.get("stage") or {}
                        stage = PipelineStage(
                            stage_doc.get("name", ""), dict(stage_doc.get("params", {}))
                        )
                        session.apply(stage)
                    elif groups["verb"] == "undo":
                        session.undo()
                    else:
                        session.redo()
                    self._json(200, session.summary())
            elif "artifact" in groups and "/download/" in path:
                session = sessions.get(groups["sid"])
                with session.lock:
                    text = getattr(session.current, groups["artifact"])
                if text is None:
                    raise NotFound(f"session has no {groups['artifact']} yet")
                content_type = (
                    "text/plain; charset=utf-8"
                    if groups["artifact"] == "circuit"
                    else "application/json"
                )
                self._send(200, (text + "\n").encode(), content_type)
            else:
                session = sessions.get(groups["sid"])
                artifact = groups["artifact"]
                with session.lock:
                    if artifact == "history":
                        self._json(200, {"history": session.history})
                        return
                    text = getattr(session.current, artifact)
                    summary = session.summary()
                if text is None:
                    raise NotFound(f"session has no {artifact} yet")
                if artifact == "circuit":
                    self._json(200, {"lines": text.splitlines(), "digest": summary["digest"]})
                else:
                    self._json(200, json.loads(text))

    return ThreadingHTTPServer((host, port), Handler)


def serve(host: str = "127.0.0.1", port: int = 8720) -> None:
    """Run the service until interrupted."""
    server = make_server(host, port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
