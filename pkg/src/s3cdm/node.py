"""Node service: acknowledges requests, executes approved actions, keeps logs."""
import shlex
import subprocess
from typing import Callable, Dict, Optional, Tuple

from .service import ServiceBase
from .tickets import Ticket, consistent, restamp

RESULT_HOLD_MS = 60_000

Executor = Callable[[str], Tuple[str, str]]  # action -> (status, output)


def recording_executor(action: str) -> Tuple[str, str]:
    """Test-mode executor: records the action without running anything."""
    return "recorded", f"executed {action}"


ALLOWED_COMMANDS = {"ls", "pwd", "date", "echo", "hostname", "whoami"}


def shell_executor(action: str) -> Tuple[str, str]:
    """Live-mode executor restricted to harmless allow-listed commands."""
    parts = shlex.split(action)
    if not parts or parts[0] not in ALLOWED_COMMANDS:
        return "refused", f"command {action!r} is not allow-listed"
    proc = subprocess.run(parts, capture_output=True, text=True, timeout=10)
    status = "ok" if proc.returncode == 0 else f"exit {proc.returncode}"
    return status, proc.stdout.strip() or proc.stderr.strip()


class Node(ServiceBase):
    def __init__(self, name, registry, transport, dealer_name: str = "dealer",
                 clock=None, events=None, executor: Optional[Executor] = None):
        super().__init__(name, registry, transport, clock=clock, events=events)
        self.dealer_name = dealer_name
        self.executor = executor or recording_executor
        self.entries: Dict[str, dict] = {}
        self.routes.update({
            ("POST", "/action-request"): self.ep_action_request,
            ("POST", "/action-request-result"): self.ep_result,
            ("POST", "/reset"): self.ep_reset,
            ("GET", "/state"): self.ep_state,
        })

    def _entry(self, reference: str) -> dict:
        return self.entries.setdefault(reference, {
            "controller_ticket": None,
            "result": None,
            "result_at": None,
            "events": [],
            "executions": [],
            "executed": False,
        })

    def _event(self, entry: dict, message: str):
        entry["events"].append({"timestamp": self.clock.now_ms(), "message": message})

    def ep_action_request(self, query, body):
        ticket = Ticket.from_json(body["ticket"])
        entry = self._entry(ticket.reference)
        if entry["controller_ticket"] is not None:
            self._event(entry, "duplicate request ticket ignored")
            return {"status": "ok", "note": "duplicate"}
        entry["controller_ticket"] = ticket
        self._event(entry, f"request {ticket.request} received from {ticket.from_node}")
        ack = restamp(ticket, self.clock)
        self.send(self.dealer_name, "/forward-action-request", {"ticket": ack.to_json()})
        self._event(entry, "acknowledgment sent to dealer")
        self.log("request_acked", reference=ticket.reference, request=ticket.request)
        self._try_execute(entry)
        return {"status": "ok"}

    def ep_result(self, query, body):
        reference = body.get("reference", "")
        entry = self._entry(reference)
        outcome = body.get("outcome", "")
        if outcome != "success":
            self._event(entry, f"request rejected: {body.get('detail', '')}")
            self.log("result_rejected", reference=reference)
            return {"status": "ok"}
        entry["result"] = {
            "action": body.get("action", ""),
            "appended": list(body.get("appended", [])),
            "ticket": Ticket.from_json(body["ticket"]) if body.get("ticket") else None,
        }
        entry["result_at"] = self.clock.now_ms()
        self._event(entry, f"recovery success received for action {body.get('action', '')}")
        self._try_execute(entry)
        return {"status": "ok"}

    def _try_execute(self, entry: dict):
        """Run the action once both the controller ticket and a matching
        success result are present."""
        if entry["executed"] or entry["result"] is None:
            return
        ticket = entry["controller_ticket"]
        if ticket is None:
            return
        if self.clock.now_ms() - entry["result_at"] > RESULT_HOLD_MS:
            self._event(entry, "stale result discarded (ticket arrived too late)")
            entry["result"] = None
            return
        result_ticket = entry["result"]["ticket"]
        if result_ticket is not None and not consistent(ticket, result_ticket):
            self._event(entry, "ticket mismatch between controller and dealer; not executing")
            return
        entry["executed"] = True
        for action in [entry["result"]["action"], *entry["result"]["appended"]]:
            status, output = self.executor(action)
            entry["executions"].append({"command": action, "status": status, "output": output})
            self._event(entry, f"action {action} executed: {status}")
            self.log("action_executed", reference=ticket.reference, action=action,
                     exec_status=status)

    def ep_reset(self, query, body):
        self.entries.clear()
        return {"status": "ok"}

    def ep_state(self, query, body):
        return {
            "status": "ok",
            "name": self.name,
            "entries": {
                ref: {
                    "request": e["controller_ticket"].request if e["controller_ticket"] else None,
                    "executed": e["executed"],
                    "executions": e["executions"],
                    "events": e["events"],
                }
                for ref, e in self.entries.items()
            },
            "forward_log": self.forward_log,
        }
