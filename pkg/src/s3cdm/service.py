"""Base class for dealer/controller/node services.

Every inter-service message travels in a routing envelope.  A sender asks the
registry for the next hop toward the destination and posts the envelope to
that hop; an intermediate service records a forward-log entry and sends it
onward; the destination unwraps the payload and dispatches it to one of its
local endpoint handlers.
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

from .core import EventLog, SystemClock
from .routing import Envelope, NoRouteError

logger = logging.getLogger(__name__)

Handler = Callable[[dict, dict], dict]  # (query, body) -> response


class ServiceBase:
    def __init__(self, name: str, registry, transport, clock=None, events: Optional[EventLog] = None):
        self.name = name
        self.registry = registry
        self.transport = transport
        self.clock = clock or SystemClock()
        self.events = events or EventLog(self.clock)
        self.forward_log: List[dict] = []
        self.routes: Dict[Tuple[str, str], Handler] = {
            ("GET", "/forward-log"): lambda q, b: {"status": "ok", "entries": self.forward_log},
        }

    def log(self, event: str, **detail):
        self.events.append(self.name, event, **detail)

    # -- sending -----------------------------------------------------------

    def send(self, destination: str, path: str, body: dict, method: str = "POST"):
        reference = body.get("reference") or body.get("ticket", {}).get("reference")
        env = Envelope(
            origin=self.name,
            destination=destination,
            from_node=self.name,
            to_node="",
            payload={"method": method, "path": path, "body": body},
            reference=reference,
        )
        self._route_onward(env)

    def _route_onward(self, env: Envelope):
        if env.destination == self.name:
            self.dispatch(env.payload)
            return
        hop_limit = self.registry.vertex_count()
        if env.hops >= hop_limit:
            self.log("routing_loop", reference=env.reference, destination=env.destination)
            self._report_failure(env, "hop limit exceeded")
            return
        try:
            next_name, url = self.registry.next_hop(self.name, env.destination)
        except NoRouteError as exc:
            self.log("delivery_failure", reference=env.reference,
                     destination=env.destination, reason=str(exc))
            self._report_failure(env, str(exc))
            return
        env.from_node = self.name
        env.to_node = next_name
        env.hops += 1
        self.transport.post(env, url)

    def _report_failure(self, env: Envelope, reason: str):
        if env.origin != self.name:
            # best effort: tell the origin directly, bypassing routing
            self.transport.notify_failure(env, reason)

    def on_delivery_failure(self, env: Envelope, reason: str):
        self.log("delivery_failure_reported", reference=env.reference,
                 destination=env.destination, reason=reason)

    # -- receiving ---------------------------------------------------------

    def receive_envelope(self, env: Envelope):
        if env.destination == self.name:
            self.dispatch(env.payload)
            return
        self.forward_log.append(
            {"reference": env.reference, "origin": env.origin, "destination": env.destination}
        )
        self.log("forwarded", reference=env.reference, origin=env.origin,
                 destination=env.destination)
        self._route_onward(env)

    def dispatch(self, payload: dict) -> dict:
        method = payload.get("method", "POST")
        path = payload["path"]
        handler = self.routes.get((method, path))
        if handler is None:
            logger.warning("%s: no handler for %s %s", self.name, method, path)
            return {"status": "error", "error": f"no handler for {method} {path}"}
        return handler(payload.get("query") or {}, payload.get("body") or {})
