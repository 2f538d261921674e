"""Shared runtime pieces: clocks and the event log.

Scenario determinism hinges on injecting a simulated clock and a seeded RNG
everywhere; the wall clock is only used in live (socket) mode.
"""
import threading
import time
from typing import List


class SystemClock:
    def now_ms(self) -> int:
        return int(time.time() * 1000)


class SimClock:
    """Deterministic clock: advances 1 ms per reading."""

    def __init__(self, start_ms: int = 1_700_000_000_000):
        self._now = start_ms
        self._lock = threading.Lock()

    def now_ms(self) -> int:
        with self._lock:
            self._now += 1
            return self._now

    def advance(self, ms: int):
        with self._lock:
            self._now += ms


class EventLog:
    """Ordered, thread-safe trace of everything the services do."""

    def __init__(self, clock=None):
        self.events: List[dict] = []
        self.clock = clock or SystemClock()
        self._lock = threading.Lock()

    def append(self, service: str, event: str, **detail):
        with self._lock:
            self.events.append(
                {
                    "seq": len(self.events),
                    "timestamp": self.clock.now_ms(),
                    "service": service,
                    "event": event,
                    **detail,
                }
            )

    def of_type(self, event: str) -> List[dict]:
        return [e for e in self.events if e["event"] == event]

    def clear(self):
        with self._lock:
            self.events.clear()
