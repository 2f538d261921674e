"""Tickets: canonical request descriptors exchanged between services."""
import random
from dataclasses import dataclass

CONSISTENCY_WINDOW_MS = 30_000


@dataclass(frozen=True)
class Ticket:
    timestamp: int  # UTC milliseconds
    from_node: str
    to_node: str
    request: str
    reference: str

    def render(self) -> str:
        return f"{self.timestamp}-{self.from_node}-{self.to_node}-{self.request}"

    def to_json(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "from": self.from_node,
            "to": self.to_node,
            "request": self.request,
            "reference": self.reference,
        }

    @staticmethod
    def from_json(doc: dict) -> "Ticket":
        return Ticket(
            timestamp=doc["timestamp"],
            from_node=doc["from"],
            to_node=doc["to"],
            request=doc["request"],
            reference=doc["reference"],
        )


def new_ticket(clock, rng: random.Random, from_node: str, to_node: str, request: str) -> Ticket:
    ts = clock.now_ms()
    reference = f"{ts}-{from_node}-{to_node}-{request}-{rng.randrange(16**4):04x}"
    return Ticket(ts, from_node, to_node, request, reference)


def restamp(ticket: Ticket, clock) -> Ticket:
    """Same request and reference, fresh timestamp (acks and solicitations)."""
    return Ticket(
        clock.now_ms(), ticket.from_node, ticket.to_node, ticket.request, ticket.reference
    )


def consistent(a: Ticket, b: Ticket, window_ms: int = CONSISTENCY_WINDOW_MS) -> bool:
    """Same from/to/request/reference with timestamps inside the window."""
    return (
        a.from_node == b.from_node
        and a.to_node == b.to_node
        and a.request == b.request
        and a.reference == b.reference
        and abs(a.timestamp - b.timestamp) <= window_ms
    )
