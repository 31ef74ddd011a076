"""Local JSON-over-HTTP service around one tailoring session.

Serves the API the browser UI consumes, plus the UI's static assets.
Mutations are serialized through one lock and guarded by an optimistic
revision number: a mutation carrying a stale revision is rejected with 409
and the client refetches. Ctrl-C persists the partition to a sidecar file
next to the input so a later ``serve`` resumes where the user stopped.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import (
    CbtError,
    CyclicClusterDependency,
    FewerThanTwo,
    NotProperSubset,
    OutputExists,
    PortInUse,
    SelectionPatchConflict,
    UnknownCluster,
)
from .export import DEFAULT_MESSAGE_TEMPLATE, export_git, plan_export
from .pipeline import Analysis, save_sidecar
from .session import ClusterSession

WEBUI_DIR = Path(__file__).parent / "webui"
_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json",
}


class SessionService:
    """Session state + revision bookkeeping behind the HTTP handler."""

    def __init__(self, analysis: Analysis, input_path: str | Path, revision: int = 0):
        self.session = ClusterSession(analysis.history, analysis.partition)
        self.analysis = analysis
        self.input_path = input_path
        self.revision = revision
        self.lock = threading.Lock()

    def state_payload(self) -> dict:
        points = {p.bead_id: p for p in self.session.project_beads()}
        beads = []
        for b in self.session.history.beads:
            p = points[b.id]
            beads.append(
                {
                    "id": b.id,
                    "seq": b.seq,
                    "ts": b.ts,
                    "x": p.x,
                    "y": p.y,
                    "lane_label": p.label,
                    "cluster_id": p.cluster_id,
                    "file": b.file,
                    "enclosing_class": b.enclosing_class,
                    "enclosing_method": b.enclosing_method,
                }
            )
        clusters = [
            {"id": c.id, "color": c.color, "bead_ids": list(c.bead_ids)}
            for c in self.session.partition.clusters
        ]
        return {"revision": self.revision, "beads": beads, "clusters": clusters}

    def check_revision(self, payload: dict) -> None:
        if payload.get("revision") != self.revision:
            raise StaleRevision(self.revision)

    def save(self) -> Path:
        return save_sidecar(self.input_path, self.session.partition, self.revision)


class StaleRevision(Exception):
    def __init__(self, current: int):
        self.current = current
        super().__init__(f"stale revision; server is at {current}")


class _Handler(BaseHTTPRequestHandler):
    service: SessionService  # set on the subclass built in make_server

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # --- plumbing ------------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        try:
            return json.loads(self.rfile.read(length).decode("utf-8"))
        except json.JSONDecodeError:
            raise ValueError("request body is not valid JSON")

    def _send_error_json(self, status: int, error: str, **extra) -> None:
        self._send_json(status, {"error": error, **extra})

    def _serve_static(self, path: str) -> None:
        name = "index.html" if path in ("/", "") else path.lstrip("/")
        target = (WEBUI_DIR / name).resolve()
        if not str(target).startswith(str(WEBUI_DIR.resolve())) or not target.is_file():
            self._send_error_json(404, f"no such asset: {path}")
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    # --- routes --------------------------------------------------------------

    def do_GET(self):
        svc = self.service
        url = urlparse(self.path)
        try:
            if url.path == "/api/session":
                with svc.lock:
                    self._send_json(200, svc.state_payload())
            elif url.path == "/api/diff":
                q = parse_qs(url.query)
                ids = [c for chunk in q.get("clusters", []) for c in chunk.split(",") if c]
                if not ids:
                    self._send_error_json(400, "clusters query parameter required")
                    return
                with svc.lock:
                    diff = svc.session.augmented_diff(ids)
                self._send_json(200, {"revision": svc.revision, "lines": diff.to_json()})
            elif url.path.startswith("/api/"):
                self._send_error_json(404, f"unknown endpoint {url.path}")
            else:
                self._serve_static(url.path)
        except UnknownCluster as e:
            self._send_error_json(404, str(e), cluster_id=e.cluster_id)
        except SelectionPatchConflict as e:
            self._send_error_json(409, str(e), kind="selection-patch-conflict", seq=e.seq)
        except CbtError as e:
            self._send_error_json(400, str(e))

    def do_POST(self):
        svc = self.service
        url = urlparse(self.path)
        if not url.path.startswith("/api/"):
            self._send_error_json(404, f"unknown endpoint {url.path}")
            return
        try:
            payload = self._read_json()
            with svc.lock:
                if url.path == "/api/clusters/split":
                    svc.check_revision(payload)
                    new_id = svc.session.split_cluster(
                        payload.get("cluster_id", ""), payload.get("bead_ids", [])
                    )
                    svc.revision += 1
                    self._send_json(200, {"revision": svc.revision, "new_cluster": new_id})
                elif url.path == "/api/clusters/merge":
                    svc.check_revision(payload)
                    survivor = svc.session.merge_clusters(payload.get("cluster_ids", []))
                    svc.revision += 1
                    self._send_json(200, {"revision": svc.revision, "surviving_cluster": survivor})
                elif url.path == "/api/undo":
                    svc.check_revision(payload)
                    if not svc.session.undo():
                        self._send_error_json(400, "nothing to undo")
                        return
                    svc.revision += 1
                    self._send_json(200, {"revision": svc.revision})
                elif url.path == "/api/redo":
                    svc.check_revision(payload)
                    if not svc.session.redo():
                        self._send_error_json(400, "nothing to redo")
                        return
                    svc.revision += 1
                    self._send_json(200, {"revision": svc.revision})
                elif url.path == "/api/export":
                    out_path = payload.get("out_path")
                    if not out_path:
                        self._send_error_json(400, "out_path required")
                        return
                    template = payload.get("message_template") or DEFAULT_MESSAGE_TEMPLATE
                    plan = plan_export(svc.session.history, svc.session.partition)
                    commits = export_git(plan, out_path, template)
                    self._send_json(200, {"commits": commits})
                else:
                    self._send_error_json(404, f"unknown endpoint {url.path}")
        except StaleRevision as e:
            self._send_error_json(409, str(e), kind="stale-revision", revision=e.current)
        except UnknownCluster as e:
            self._send_error_json(404, str(e), cluster_id=e.cluster_id)
        except (NotProperSubset, FewerThanTwo, OutputExists, ValueError) as e:
            self._send_error_json(400, str(e))
        except SelectionPatchConflict as e:
            self._send_error_json(409, str(e), kind="selection-patch-conflict", seq=e.seq)
        except CyclicClusterDependency as e:
            self._send_error_json(
                409,
                str(e),
                kind="cyclic-cluster-dependency",
                clusters=e.cluster_ids,
                witness=list(e.witness),
            )
        except CbtError as e:
            self._send_error_json(400, str(e))


def make_server(service: SessionService, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as e:
        if e.errno == 98:  # EADDRINUSE
            raise PortInUse(port) from None
        raise


def serve(service: SessionService, port: int, host: str = "127.0.0.1") -> None:
    """Run until interrupted; persists the session sidecar on the way out."""
    server = make_server(service, port, host)
    print(f"serving on http://{host}:{server.server_address[1]}/ (Ctrl-C to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        path = service.save()
        print(f"session saved to {path}", flush=True)
