"""Service-name directory and weighted turn-by-turn routing.

The registry holds every service's URL and an undirected weighted graph over
the registered names.  `next_hop` answers one hop at a time using Dijkstra's
shortest path; disabled edges are treated as absent so the no-route case is
explicit.
"""
import heapq
import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple


class RoutingError(Exception):
    pass


class NoRouteError(RoutingError):
    """Destination is unreachable over enabled edges."""


@dataclass
class Edge:
    weight: int = 1
    disabled: bool = False


@dataclass
class RouteGraph:
    vertices: set = field(default_factory=set)
    edges: Dict[FrozenSet[str], Edge] = field(default_factory=dict)

    def full_mesh(self, names):
        """Reset to a complete graph over `names` with unit weights."""
        self.vertices = set(names)
        self.edges = {}
        ordered = sorted(self.vertices)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                self.edges[frozenset((a, b))] = Edge()

    def set_edge(self, a: str, b: str, weight: int, disabled: bool):
        if a not in self.vertices or b not in self.vertices:
            raise RoutingError(f"unknown vertex in edge ({a}, {b})")
        if a == b:
            raise RoutingError("self-edges are not allowed")
        if weight < 1:
            raise RoutingError(f"edge weight must be >= 1, got {weight}")
        self.edges[frozenset((a, b))] = Edge(weight=weight, disabled=disabled)

    def neighbors(self, name: str) -> List[Tuple[str, int]]:
        out = []
        for pair, edge in self.edges.items():
            if edge.disabled or name not in pair:
                continue
            (other,) = pair - {name}
            out.append((other, edge.weight))
        return sorted(out)

    def distances_from(self, source: str) -> Dict[str, int]:
        """Dijkstra distances from `source` over enabled edges."""
        dist = {source: 0}
        heap = [(0, source)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in self.neighbors(u):
                nd = d + w
                if nd < dist.get(v, float("inf")):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist


class NameRegistry:
    """Name -> URL directory plus the route graph."""

    def __init__(self):
        self.urls: Dict[str, str] = {}
        self.graph = RouteGraph()
        self._lock = threading.Lock()

    def register_names(self, mapping: Dict[str, str]):
        names = list(mapping)
        if len(set(names)) != len(names):
            raise RoutingError("duplicate service names")
        with self._lock:
            self.urls = dict(mapping)
            self.graph.full_mesh(names)

    def update_route(self, a: str, b: str, weight: int = 1, disabled: bool = False):
        with self._lock:
            self.graph.set_edge(a, b, weight, disabled)

    def reset_routes(self):
        with self._lock:
            self.graph.full_mesh(self.graph.vertices)

    def url_of(self, name: str) -> str:
        try:
            return self.urls[name]
        except KeyError:
            raise RoutingError(f"unknown service name {name!r}")

    def next_hop(self, from_name: str, destination: str) -> Tuple[str, str]:
        """First hop of a minimum-weight path; ties break to the
        lexicographically smallest neighbor name."""
        with self._lock:
            if from_name not in self.graph.vertices:
                raise RoutingError(f"unknown service name {from_name!r}")
            if destination not in self.graph.vertices:
                raise RoutingError(f"unknown service name {destination!r}")
            if from_name == destination:
                return destination, self.urls.get(destination, "")
            dist = self.graph.distances_from(destination)
            if from_name not in dist:
                raise NoRouteError(f"no enabled path from {from_name} to {destination}")
            total = dist[from_name]
            for neighbor, weight in self.graph.neighbors(from_name):
                if neighbor in dist and weight + dist[neighbor] == total:
                    return neighbor, self.urls.get(neighbor, "")
            raise NoRouteError(f"no enabled path from {from_name} to {destination}")

    def vertex_count(self) -> int:
        return len(self.graph.vertices)

    def graph_view(self) -> dict:
        return {
            "vertices": sorted(self.graph.vertices),
            "urls": dict(self.urls),
            "edges": [
                {
                    "a": min(pair),
                    "b": max(pair),
                    "weight": edge.weight,
                    "disabled": edge.disabled,
                }
                for pair, edge in sorted(self.graph.edges.items(), key=lambda kv: sorted(kv[0]))
            ],
        }


@dataclass
class Envelope:
    """Routing wrapper carried by every inter-service message."""
    origin: str
    destination: str
    from_node: str
    to_node: str
    payload: dict  # {method, path, body}
    reference: Optional[str] = None
    hops: int = 0

    def to_json(self) -> dict:
        return {
            "origin": self.origin,
            "destination": self.destination,
            "from_node": self.from_node,
            "to_node": self.to_node,
            "payload": self.payload,
            "reference": self.reference,
            "hops": self.hops,
        }

    @staticmethod
    def from_json(doc: dict) -> "Envelope":
        return Envelope(
            origin=doc["origin"],
            destination=doc["destination"],
            from_node=doc["from_node"],
            to_node=doc["to_node"],
            payload=doc["payload"],
            reference=doc.get("reference"),
            hops=doc.get("hops", 0),
        )
