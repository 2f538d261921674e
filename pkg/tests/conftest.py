import pytest

from s3cdm.harness import Topology, TopologyConfig

LEVEL2_TABLE = (
    "| From | To | Level | Request | Action |\n"
    "| 3 | 4 | 2 | R_3 | A_3 |\n"
)

FOUR_ROW_TABLE = (
    "| From | To | Level | Request | Action |\n"
    "| 1 | 2 | 2 | R_1 | A_1 |\n"
    "| 3 | 2 | 2 | R_2 | A_2 |\n"
    "| 3 | 2 | 2 | R_3 | A_3 |\n"
    "| 2 | 1 | 2 | R_4 | A_4 |\n"
)


def make_topology(**overrides) -> Topology:
    kw = dict(controllers=6, nodes=6, seed=7)
    kw.update(overrides)
    return Topology(TopologyConfig(**kw)).boot()


@pytest.fixture
def topology():
    return make_topology()


def dealer_post(topology, path, body):
    return topology.dealer.dispatch({"method": "POST", "path": path, "body": body})


def controller_post(topology, name, path, body):
    return topology.controllers[name].dispatch(
        {"method": "POST", "path": path, "body": body})


def setup_case3(topology, scheme="hash", table=LEVEL2_TABLE,
                participants=("controller-5", "controller-6")):
    """Scheme (2,3), explicit participants, one dealt level-2 row."""
    assert dealer_post(topology, "/command/scheme-config",
                       {"scheme": scheme, "threshold": 2, "participants": 3}
                       )["status"] == "ok"
    assert dealer_post(topology, "/command/tn-participant-config",
                       {"strategy": "explicit", "participants": list(participants)}
                       )["status"] == "ok"
    assert dealer_post(topology, "/command/action", {"text": table})["status"] == "ok"
    resp = dealer_post(topology, "/command/init-action", {})
    assert resp["status"] == "ok", resp
    topology.run_until_quiet()
    return resp
