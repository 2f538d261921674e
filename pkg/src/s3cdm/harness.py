"""Topology boot: wire a full dealer/controller/node/registry system.

In-process mode uses direct dispatch over the queue transport (deterministic,
socket-free).  Socket mode serves every service over HTTP with the same
envelope contract.
"""
import random
import time
from dataclasses import dataclass
from typing import Dict, List, Optional

from .actions import ActionStore, SqliteActionStore
from .controller import Controller
from .core import EventLog, SimClock, SystemClock
from .dealer import Dealer
from .httpserver import HttpEndpoint, RegistryApp, RegistryHttpClient, ServiceApp
from .node import Node
from .routing import NameRegistry
from .service import ServiceBase
from .transport import HttpTransport, InProcessTransport


@dataclass
class TopologyConfig:
    controllers: int = 6
    nodes: int = 6
    dealer_name: str = "dealer"
    registry_name: str = "name-registry"
    in_process: bool = True
    base_port: int = 8700
    host: str = "127.0.0.1"
    mapping_path: Optional[str] = None
    seed: int = 0
    db_path: Optional[str] = None  # sqlite file; None = in-memory store
    auto_respond: bool = False
    shamir_prime: Optional[int] = None

    @property
    def controller_names(self) -> List[str]:
        return [f"controller-{i}" for i in range(1, self.controllers + 1)]

    @property
    def node_names(self) -> List[str]:
        return [f"node-{i}" for i in range(1, self.nodes + 1)]

    @property
    def all_names(self) -> List[str]:
        return (
            [self.dealer_name, self.registry_name]
            + self.controller_names
            + self.node_names
        )


def load_mapping(path: str) -> Dict[str, str]:
    """Parse "name = url" lines; blanks, comments and [sections] are skipped."""
    mapping = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith(("#", ";", "[")):
                continue
            name, _, url = line.partition("=")
            if not _:
                raise ValueError(f"bad mapping line: {line!r}")
            mapping[name.strip()] = url.strip()
    if len(mapping) != len(set(mapping)):
        raise ValueError("duplicate names in mapping file")
    return mapping


class Topology:
    def __init__(self, config: TopologyConfig):
        if len(set(config.all_names)) != len(config.all_names):
            raise ValueError("service names must be unique")
        if config.controllers < 1 or config.nodes < 1:
            raise ValueError("need at least one controller and one node")
        self.config = config
        self.clock = SimClock() if config.in_process else SystemClock()
        self.events = EventLog(self.clock)
        self.registry = NameRegistry()
        self.store: ActionStore = (
            SqliteActionStore(config.db_path) if config.db_path else ActionStore()
        )
        self._master_rng = random.Random(config.seed)
        self.dealer: Optional[Dealer] = None
        self.controllers: Dict[str, Controller] = {}
        self.nodes: Dict[str, Node] = {}
        self.endpoints: List[HttpEndpoint] = []
        self.transport = None

    def _rng(self) -> random.Random:
        return random.Random(self._master_rng.randrange(2**63))

    # -- boot --------------------------------------------------------------

    def boot(self) -> "Topology":
        if self.config.in_process:
            self._boot_in_process()
        else:
            self._boot_http()
        return self

    def _build_services(self, registry_client, transport):
        cfg = self.config
        self.dealer = Dealer(
            cfg.dealer_name, registry_client, transport, self.store,
            rng=self._rng(), clock=self.clock, events=self.events,
            shamir_prime=cfg.shamir_prime,
        )
        self.dealer.controller_pool = cfg.controller_names
        transport.attach(self.dealer)
        for name in cfg.controller_names:
            c = Controller(
                name, registry_client, transport, dealer_name=cfg.dealer_name,
                rng=self._rng(), clock=self.clock, events=self.events,
                auto_respond=cfg.auto_respond,
            )
            self.controllers[name] = c
            transport.attach(c)
        for name in cfg.node_names:
            nd = Node(
                name, registry_client, transport, dealer_name=cfg.dealer_name,
                clock=self.clock, events=self.events,
            )
            self.nodes[name] = nd
            transport.attach(nd)

    def _boot_in_process(self):
        self.transport = InProcessTransport()
        self.registry.register_names({name: "" for name in self.config.all_names})
        self._build_services(self.registry, self.transport)
        # the registry occupies a graph vertex; give it forwarding ability
        forwarder = ServiceBase(self.config.registry_name, self.registry,
                                self.transport, clock=self.clock, events=self.events)
        self.transport.attach(forwarder)

    def _boot_http(self):
        cfg = self.config
        self.transport = HttpTransport()
        registry_app = RegistryApp(self.registry)
        registry_endpoint = HttpEndpoint(registry_app, cfg.host, cfg.base_port)
        registry_endpoint.start()
        self.endpoints.append(registry_endpoint)
        registry_client = RegistryHttpClient(registry_endpoint.url)
        registry_app.forwarder = ServiceBase(
            cfg.registry_name, registry_client, self.transport,
            clock=self.clock, events=self.events)
        self.transport.attach(registry_app.forwarder)
        self._build_services(registry_client, self.transport)

        mapping = {cfg.registry_name: registry_endpoint.url}
        # base_port 0 = ephemeral port for every service (handy in tests)
        port = cfg.base_port + 1 if cfg.base_port else 0
        for service in [self.dealer, *self.controllers.values(), *self.nodes.values()]:
            ep = HttpEndpoint(ServiceApp(service), cfg.host, port)
            ep.start()
            self.endpoints.append(ep)
            mapping[service.name] = ep.url
            if port:
                port += 1
        if cfg.mapping_path:
            mapping = {**mapping, **load_mapping(cfg.mapping_path)}
        self.registry.register_names(mapping)

    def shutdown(self):
        for ep in self.endpoints:
            ep.stop()
        self.endpoints.clear()

    # -- orchestration -----------------------------------------------------

    def run_until_quiet(self, timeout_s: float = 10.0) -> int:
        """Deliver all in-flight envelopes; returns deliveries made."""
        if isinstance(self.transport, InProcessTransport):
            return self.transport.pump()
        time.sleep(min(timeout_s, 1.0))  # socket mode: sends are synchronous
        return 0

    def write_mapping(self, path: str):
        with open(path, "w") as fh:
            for name, url in sorted(self.registry.urls.items()):
                fh.write(f"{name} = {url}\n")
