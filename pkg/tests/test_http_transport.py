"""Socket-mode contract: the HTTP transport must carry the same protocol
as the in-process queue transport, end to end over real sockets."""
import time

import pytest
import requests

from s3cdm.harness import Topology, TopologyConfig, load_mapping

from conftest import LEVEL2_TABLE


@pytest.fixture(scope="module")
def http_topology():
    topology = Topology(TopologyConfig(
        controllers=6, nodes=6, in_process=False, base_port=0, seed=7,
    )).boot()
    yield topology
    topology.shutdown()


def url_of(topology, name):
    return topology.registry.urls[name]


def post(topology, name, path, body):
    resp = requests.post(url_of(topology, name) + path, json=body, timeout=10)
    resp.raise_for_status()
    return resp.json()


def get(topology, name, path, params=None):
    resp = requests.get(url_of(topology, name) + path, params=params, timeout=10)
    resp.raise_for_status()
    return resp.json()


def wait_for(predicate, timeout_s=10.0):
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        value = predicate()
        if value:
            return value
        time.sleep(0.05)
    raise AssertionError("condition not met within timeout")


def test_registry_serves_paths_and_graph(http_topology):
    doc = get(http_topology, "name-registry", "/graph")
    assert doc["status"] == "ok"
    assert "dealer" in doc["vertices"]
    hop = get(http_topology, "name-registry", "/path",
              params={"from": "dealer", "destination": "node-4"})
    assert hop["status"] == "ok"
    assert hop["next"] == "node-4"
    assert hop["url"].startswith("http://")


def test_full_authorization_over_sockets(http_topology):
    t = http_topology
    assert post(t, "dealer", "/command/scheme-config",
                {"scheme": "hash", "threshold": 2, "participants": 3}
                )["status"] == "ok"
    assert post(t, "dealer", "/command/tn-participant-config",
                {"strategy": "explicit",
                 "participants": ["controller-5", "controller-6"]}
                )["status"] == "ok"
    assert post(t, "dealer", "/command/action",
                {"text": LEVEL2_TABLE})["status"] == "ok"
    assert post(t, "dealer", "/command/init-action", {})["status"] == "ok"

    wait_for(lambda: get(t, "controller-5", "/state")["shares"])

    raised = post(t, "controller-3", "/command/action-request", {"request": "R_3"})
    assert raised["status"] == "ok"
    reference = raised["reference"]

    wait_for(lambda: reference in get(t, "controller-5", "/state")["solicitations"])
    assert post(t, "controller-5", "/command/respond-share",
                {"reference": reference})["status"] == "ok"

    state = wait_for(lambda: (
        lambda p: p if p and p["state"].startswith("resolved") else None
    )(get(t, "dealer", "/state")["pending"].get(reference)))
    assert state["state"] == "resolved-success"

    entry = get(t, "node-4", "/state")["entries"][reference]
    assert [x["command"] for x in entry["executions"]] == ["A_3"]

    audit = get(t, "dealer", "/audit")
    rows = [r for r in audit["audits"] if r["reference_number"] == reference]
    assert [(r["is_success"], r["context_nodes"]) for r in rows] == [(True, "[1, 2]")]


def test_mapping_file_roundtrip(http_topology, tmp_path):
    path = tmp_path / "services.conf"
    http_topology.write_mapping(str(path))
    assert load_mapping(str(path)) == http_topology.registry.urls
