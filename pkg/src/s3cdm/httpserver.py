"""HTTP adapters: serve any service (or the registry) as a JSON-over-HTTP
endpoint set, and a registry client for services running in socket mode."""
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import requests

from .routing import Envelope, NameRegistry, NoRouteError, RoutingError

logger = logging.getLogger(__name__)


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, fmt, *args):
        logger.debug("%s %s", self.address_string(), fmt % args)

    def _reply(self, doc: dict, code: int = 200):
        data = json.dumps(doc).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        return json.loads(self.rfile.read(length))

    def _handle(self, method: str):
        parsed = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        try:
            doc = self.server.app.handle(method, parsed.path, query, self._body())
        except Exception as exc:  # surface handler errors as JSON, keep serving
            logger.exception("handler error for %s %s", method, parsed.path)
            self._reply({"status": "error", "error": str(exc)}, code=500)
            return
        self._reply(doc)

    def do_GET(self):
        self._handle("GET")

    def do_POST(self):
        self._handle("POST")


class ServiceApp:
    """Adapts a ServiceBase to HTTP: /envelope plus its local endpoints."""

    def __init__(self, service):
        self.service = service

    def handle(self, method, path, query, body):
        if method == "POST" and path == "/envelope":
            self.service.receive_envelope(Envelope.from_json(body))
            return {"status": "ok"}
        return self.service.dispatch({"method": method, "path": path,
                                      "query": query, "body": body})


class RegistryApp:
    def __init__(self, registry: NameRegistry, forwarder=None):
        self.registry = registry
        # the registry is itself a vertex in the route graph, so it must be
        # able to pass envelopes along like any other service
        self.forwarder = forwarder

    def handle(self, method, path, query, body):
        if method == "POST" and path == "/envelope" and self.forwarder is not None:
            self.forwarder.receive_envelope(Envelope.from_json(body))
            return {"status": "ok"}
        try:
            if method == "POST" and path == "/register":
                self.registry.register_names(body["mapping"])
                return {"status": "ok", "count": len(body["mapping"])}
            if method == "POST" and path == "/route":
                if body.get("reset"):
                    self.registry.reset_routes()
                    return {"status": "ok"}
                self.registry.update_route(
                    body["a"], body["b"],
                    weight=int(body.get("weight", 1)),
                    disabled=bool(body.get("disabled", False)),
                )
                return {"status": "ok"}
            if method == "GET" and path == "/path":
                next_name, url = self.registry.next_hop(query["from"], query["destination"])
                return {"status": "ok", "next": next_name, "url": url}
            if method == "GET" and path == "/graph":
                return {"status": "ok", **self.registry.graph_view()}
        except NoRouteError as exc:
            return {"status": "no-route", "error": str(exc)}
        except RoutingError as exc:
            return {"status": "error", "error": str(exc)}
        return {"status": "error", "error": f"no handler for {method} {path}"}


class HttpEndpoint:
    """Runs one app on a background ThreadingHTTPServer."""

    def __init__(self, app, host: str = "127.0.0.1", port: int = 0):
        self.httpd = ThreadingHTTPServer((host, port), _Handler)
        self.httpd.app = app
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self):
        self.thread.start()

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()


class RegistryHttpClient:
    """Registry access for services in socket mode (direct URL, not routed)."""

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def next_hop(self, from_name: str, destination: str):
        resp = requests.get(
            f"{self.base_url}/path",
            params={"from": from_name, "destination": destination},
            timeout=self.timeout,
        )
        doc = resp.json()
        if doc.get("status") == "no-route":
            raise NoRouteError(doc.get("error", "no route"))
        if doc.get("status") != "ok":
            raise RoutingError(doc.get("error", "registry error"))
        return doc["next"], doc["url"]

    def vertex_count(self) -> int:
        doc = requests.get(f"{self.base_url}/graph", timeout=self.timeout).json()
        return len(doc.get("vertices", []))
