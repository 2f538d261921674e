"""Envelope transports.

InProcessTransport queues envelopes and delivers them synchronously when
pumped, which makes scenario runs deterministic and socket-free.  The HTTP
transport posts the same envelope JSON to the next hop's /envelope endpoint;
both honor the identical forwarding contract.
"""
import logging
from collections import deque
from typing import Dict

import requests

from .routing import Envelope

logger = logging.getLogger(__name__)


class InProcessTransport:
    def __init__(self):
        self.services: Dict[str, object] = {}
        self.queue = deque()

    def attach(self, service):
        self.services[service.name] = service

    def post(self, env: Envelope, url: str = ""):
        self.queue.append(env)

    def notify_failure(self, env: Envelope, reason: str):
        origin = self.services.get(env.origin)
        if origin is not None:
            origin.on_delivery_failure(env, reason)

    def pump(self, max_steps: int = 10_000) -> int:
        """Deliver queued envelopes until quiescent; returns deliveries made."""
        steps = 0
        while self.queue:
            if steps >= max_steps:
                raise RuntimeError("transport did not quiesce")
            env = self.queue.popleft()
            service = self.services.get(env.to_node)
            if service is None:
                logger.warning("dropping envelope for unknown service %s", env.to_node)
                continue
            service.receive_envelope(env)
            steps += 1
        return steps

    @property
    def idle(self) -> bool:
        return not self.queue


class HttpTransport:
    """Posts envelopes over HTTP to the next hop."""

    def __init__(self, timeout: float = 10.0):
        self.timeout = timeout
        self.local_services: Dict[str, object] = {}

    def attach(self, service):
        self.local_services[service.name] = service

    def post(self, env: Envelope, url: str):
        resp = requests.post(f"{url}/envelope", json=env.to_json(), timeout=self.timeout)
        resp.raise_for_status()

    def notify_failure(self, env: Envelope, reason: str):
        origin = self.local_services.get(env.origin)
        if origin is not None:
            origin.on_delivery_failure(env, reason)
        else:
            logger.warning("delivery failure for %s: %s", env.origin, reason)
