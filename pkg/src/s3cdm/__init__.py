"""S3CDM: threshold-secret-sharing based multi-controller authorization and
cyberattack-detection simulator."""

from .harness import Topology, TopologyConfig
from .scenario import ScenarioRunner, normalize_transcript, protocol_view, run_script

__all__ = [
    "Topology",
    "TopologyConfig",
    "ScenarioRunner",
    "run_script",
    "normalize_transcript",
    "protocol_view",
]

__version__ = "0.1.0"
