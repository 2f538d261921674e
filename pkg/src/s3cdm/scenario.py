"""Scripted scenario runner with deterministic, comparable transcripts.

A script is a JSON list of step objects ({"step": ..., ...}).  Running one
yields a transcript: per-step results plus the full service event trace.
Timestamps, request references, and secret/share hex are normalized away so
two runs (or two scheme kinds) can be compared as golden files.
"""
import copy
import json
import re
from typing import List, Optional

from .harness import Topology

REFERENCE_RE = re.compile(r"\b\d{6,}-[\w.-]+?-[0-9a-f]{4}\b")
HEX_RE = re.compile(r"\b[0-9a-f]{16,}\b")
TIMESTAMP_KEYS = {"timestamp", "created_at", "result_at"}


class ScenarioError(Exception):
    pass


class ScenarioRunner:
    def __init__(self, topology: Topology):
        self.topology = topology
        self.references: List[str] = []
        self.results: List[dict] = []

    @property
    def last_reference(self) -> Optional[str]:
        return self.references[-1] if self.references else None

    def run(self, script: List[dict]) -> dict:
        for i, step in enumerate(script):
            name = step.get("step")
            handler = getattr(self, f"step_{name}", None)
            if handler is None:
                raise ScenarioError(f"unknown step {name!r} at position {i}")
            result = handler(step)
            self.results.append({"step": name, **result})
            self.topology.run_until_quiet()
        return self.transcript()

    def transcript(self) -> dict:
        return {
            "steps": copy.deepcopy(self.results),
            "events": copy.deepcopy(self.topology.events.events),
        }

    @property
    def passed(self) -> bool:
        return all(r.get("ok", True) for r in self.results)

    # -- configuration steps -----------------------------------------------

    def step_configure_scheme(self, step):
        resp = self.topology.dealer.dispatch({
            "method": "POST", "path": "/command/scheme-config",
            "body": {"scheme": step["scheme"], "threshold": step["threshold"],
                     "participants": step["participants"]},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_participant_config(self, step):
        resp = self.topology.dealer.dispatch({
            "method": "POST", "path": "/command/tn-participant-config",
            "body": {"strategy": step.get("strategy", "first_n"),
                     "participants": step.get("participants", [])},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_load_actions(self, step):
        resp = self.topology.dealer.dispatch({
            "method": "POST", "path": "/command/action", "body": {"text": step["text"]},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_init_actions(self, step):
        resp = self.topology.dealer.dispatch({
            "method": "POST", "path": "/command/init-action", "body": {},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_route_edit(self, step):
        self.topology.registry.update_route(
            step["a"], step["b"],
            weight=step.get("weight", 1), disabled=step.get("disabled", False),
        )
        return {"ok": True}

    def step_route_reset(self, step):
        self.topology.registry.reset_routes()
        return {"ok": True}

    # -- protocol steps ----------------------------------------------------

    def step_raise_request(self, step):
        controller = self.topology.controllers[step["controller"]]
        body = {"request": step["request"]}
        if "to" in step:
            body["to"] = step["to"]
        resp = controller.dispatch({
            "method": "POST", "path": "/command/action-request", "body": body,
        })
        if resp.get("reference"):
            self.references.append(resp["reference"])
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_respond_share(self, step):
        controller = self.topology.controllers[step["controller"]]
        reference = step.get("reference") or self.last_reference
        resp = controller.dispatch({
            "method": "POST", "path": "/command/respond-share",
            "body": {"reference": reference},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_corrupt_share(self, step):
        controller = self.topology.controllers[step["controller"]]
        key = (step["from"], step["to"], step["request"])
        row = controller.internal.get(key)
        if row is None:
            return {"ok": False, "error": f"{step['controller']} holds no share for {key}"}
        corrupted = step.get("share")
        if corrupted is None:
            # flip every bit: guaranteed different, deterministic
            corrupted = bytes(b ^ 0xFF for b in row["share"]).hex()
        resp = controller.dispatch({
            "method": "POST", "path": "/secret",
            "body": {"from": key[0], "to": key[1], "request": key[2],
                     "index": row["index"], "share": corrupted},
        })
        return {"ok": resp["status"] == "ok", "response": resp}

    def step_await_resolution(self, step):
        self.topology.run_until_quiet(timeout_s=step.get("timeout", 10))
        reference = step.get("reference") or self.last_reference
        pending = self.topology.dealer.pending.get(reference)
        state = pending.state.value if pending else "unknown"
        return {"ok": True, "state": state}

    # -- assertion steps ---------------------------------------------------

    def step_assert_audit(self, step):
        reference = step.get("reference") or self.last_reference
        rows = self.topology.dealer.store.list_audit(
            reference_number=reference if not step.get("all") else None,
            batch_id=step.get("batch"),
        )
        got = [{"is_success": r.is_success, "context": r.context_nodes} for r in rows]
        ok = True
        detail = {"rows": got}
        if "expect" in step:
            want = step["expect"]
            ok = len(got) == len(want) and all(
                g["is_success"] == w.get("is_success")
                and (w.get("context") is None or g["context"] == w["context"])
                for g, w in zip(got, want)
            )
        if "count" in step:
            ok = ok and len(got) == step["count"]
        return {"ok": ok, **detail}

    def step_assert_forward_log(self, step):
        reference = step.get("reference") or self.last_reference
        services = {}
        everyone = [self.topology.dealer, *self.topology.controllers.values(),
                    *self.topology.nodes.values()]
        for svc in everyone:
            entries = [e for e in svc.forward_log if e["reference"] == reference]
            if entries:
                services[svc.name] = entries
        ok = True
        if "services_with_entry" in step:
            ok = len(services) == step["services_with_entry"]
        if "service" in step:
            ok = ok and step["service"] in services
        return {"ok": ok, "services": {k: len(v) for k, v in services.items()}}

    def step_assert_node_execution(self, step):
        node = self.topology.nodes[step["node"]]
        executions = [
            e for entry in node.entries.values() for e in entry["executions"]
            if step.get("action") is None or e["command"] == step["action"]
        ]
        ok = len(executions) == step.get("count", 1)
        return {"ok": ok, "executions": executions}


def run_script(topology: Topology, script: List[dict]) -> dict:
    runner = ScenarioRunner(topology)
    transcript = runner.run(script)
    transcript["passed"] = runner.passed
    return transcript


def normalize_transcript(transcript: dict) -> dict:
    """Replace timestamps, references, and long hex strings with stable
    placeholders so transcripts compare across runs and scheme kinds."""
    refs = {}

    def ref_token(match):
        ref = match.group(0)
        if ref not in refs:
            refs[ref] = f"REF{len(refs)}"
        return refs[ref]

    def walk(obj, key=None):
        if isinstance(obj, dict):
            return {k: walk(v, k) for k, v in obj.items()}
        if isinstance(obj, list):
            return [walk(v) for v in obj]
        if key in TIMESTAMP_KEYS and isinstance(obj, int):
            return "<ts>"
        if isinstance(obj, str):
            obj = REFERENCE_RE.sub(ref_token, obj)
            obj = HEX_RE.sub("<hex>", obj)
            return obj
        return obj

    return walk(copy.deepcopy(transcript))


def protocol_view(transcript: dict) -> dict:
    """Scheme-independent projection: verdicts, deliveries, audit activity."""
    keep = {
        "request_accepted", "request_allowed", "request_denied",
        "shares_solicited", "request_resolved", "action_executed",
        "result_received", "share_responded", "solicitation_received",
    }
    norm = normalize_transcript(transcript)
    return {
        "steps": [{k: v for k, v in s.items() if k in ("step", "ok", "state")}
                  for s in norm["steps"]],
        "events": [
            {k: v for k, v in e.items() if k not in ("seq", "timestamp")}
            for e in norm["events"] if e["event"] in keep
        ],
    }


def load_script(path: str) -> List[dict]:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise ScenarioError("script file must contain a JSON list of steps")
    return doc
