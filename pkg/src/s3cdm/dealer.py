"""Dealer service: the security agent.

Configures the scheme, deals secrets and shares for level-2 action rows,
collects shares for raised requests, runs recovery-and-lookup detection
against the action database, notifies the parties, and writes the audit log.
"""
import random
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .actions import (
    ActionRecord,
    ActionStore,
    ActionTableError,
    AuditRecord,
    Verdict,
    parse_action_table,
)
from .service import ServiceBase
from .sss import (
    ControlNotFoundError,
    SchemeConfig,
    SchemeInstance,
    SchemeKind,
    deal,
    enumerate_minimal_authorized_subsets,
)
from .tickets import Ticket, consistent, restamp

MAIN_INDEX = 1


class PendingState(str, Enum):
    AWAITING_ACK = "awaiting-ack"
    COLLECTING_SHARES = "collecting-shares"
    RESOLVED_SUCCESS = "resolved-success"
    RESOLVED_FAILURE = "resolved-failure"


@dataclass
class RequestSetup:
    """Per level-2 row: the dealt scheme and who holds which share."""
    from_node: str
    to_node: str
    request: str
    instance: SchemeInstance
    participants: List[str]  # main first; position i holds index i+1
    action: str
    appended: Tuple[str, ...]

    @property
    def key(self):
        return (self.from_node, self.to_node, self.request)

    def index_of(self, controller: str) -> int:
        return self.participants.index(controller) + 1


@dataclass
class PendingRequest:
    ticket: Ticket
    setup: RequestSetup
    batch_id: str
    state: PendingState = PendingState.AWAITING_ACK
    node_ack: Optional[Ticket] = None
    collected: Dict[int, bytes] = dc_field(default_factory=dict)
    attempted: set = dc_field(default_factory=set)


class Dealer(ServiceBase):
    def __init__(self, name, registry, transport, store: ActionStore,
                 rng: Optional[random.Random] = None, clock=None, events=None,
                 shamir_prime: Optional[int] = None):
        super().__init__(name, registry, transport, clock=clock, events=events)
        self.store = store
        self.rng = rng or random.Random()
        self.shamir_prime = shamir_prime
        self.scheme_config: Optional[SchemeConfig] = None
        self.strategy: str = "first_n"
        self.explicit_participants: List[str] = []
        self.controller_pool: List[str] = []
        self.level2_sources: List[ActionRecord] = []
        self.setups: Dict[Tuple[str, str, str], RequestSetup] = {}
        self.shares_table: List[dict] = []
        self.pending: Dict[str, PendingRequest] = {}
        self.batch_id = ""
        self._batch_counter = 0
        self._round_robin_offset = 0
        self.routes.update({
            ("POST", "/command/scheme-config"): self.ep_scheme_config,
            ("POST", "/command/action"): self.ep_load_actions,
            ("POST", "/command/init-action"): self.ep_init_actions,
            ("POST", "/command/tn-participant-config"): self.ep_participant_config,
            ("POST", "/action-request"): self.ep_action_request,
            ("POST", "/forward-action-request"): self.ep_node_ack,
            ("POST", "/accept-shares"): self.ep_accept_share,
            ("GET", "/state"): self.ep_state,
            ("GET", "/audit"): self.ep_audit,
        })

    # -- configuration -----------------------------------------------------

    def ep_scheme_config(self, query, body):
        try:
            config = SchemeConfig(
                kind=SchemeKind(body["scheme"]),
                threshold=int(body["threshold"]),
                participants=int(body["participants"]),
            )
        except (ValueError, KeyError) as exc:
            return {"status": "error", "error": str(exc)}
        self.scheme_config = config
        self.log("scheme_configured", scheme=config.kind.value,
                 threshold=config.threshold, participants=config.participants)
        return {"status": "ok", "scheme": config.kind.value,
                "threshold": config.threshold, "participants": config.participants}

    def ep_participant_config(self, query, body):
        strategy = body.get("strategy", "first_n")
        if strategy not in ("first_n", "round_robin", "explicit"):
            return {"status": "error", "error": f"unknown strategy {strategy!r}"}
        explicit = list(body.get("participants", []))
        if strategy == "explicit":
            unknown = [c for c in explicit if c not in self.controller_pool]
            if unknown:
                return {"status": "error", "error": f"unknown controllers {unknown}"}
        self.strategy = strategy
        self.explicit_participants = explicit
        return {"status": "ok", "strategy": strategy}

    def ep_load_actions(self, query, body):
        try:
            records = parse_action_table(body.get("text", ""))
        except ActionTableError as exc:
            return {"status": "error", "error": str(exc)}
        self.store.upsert_actions(records)
        self.level2_sources = [r for r in records if r.level == 2]
        self.log("actions_loaded", count=len(records))
        return {"status": "ok", "count": len(records),
                "records": [list(r.key) + [r.action_column] for r in records]}

    # -- share generation and distribution ---------------------------------

    def ep_init_actions(self, query, body):
        if self.scheme_config is None:
            return {"status": "error", "error": "scheme not configured"}
        n = self.scheme_config.participants
        if len(self.controller_pool) < n:
            return {"status": "error",
                    "error": f"participant pool has {len(self.controller_pool)} "
                             f"controllers, scheme needs {n}"}
        # reset: discard prior shares, pending requests, and previously dealt rows
        for setup in self.setups.values():
            self.store.delete_action(
                (setup.from_node, setup.to_node, 2, setup.instance.secret_hex))
        self.setups.clear()
        self.shares_table.clear()
        self.pending.clear()
        self._round_robin_offset = 0
        self._batch_counter += 1
        self.batch_id = f"batch-{self._batch_counter}"

        report = []
        for row in self.level2_sources:
            try:
                participants = self._select_participants(row.from_node, n)
            except ValueError as exc:
                return {"status": "error", "error": str(exc)}
            kwargs = {}
            if self.shamir_prime is not None:
                kwargs["prime"] = self.shamir_prime
            instance = deal(self.scheme_config, self.rng, **kwargs)
            setup = RequestSetup(
                from_node=row.from_node, to_node=row.to_node, request=row.request_key,
                instance=instance, participants=participants,
                action=row.action, appended=row.appended_actions,
            )
            self.setups[setup.key] = setup
            # rewrite the action row: request name -> secret hex
            self.store.delete_action(row.key)
            self.store.upsert_actions([
                ActionRecord(row.from_node, row.to_node, 2, instance.secret_hex,
                             row.action, row.appended_actions)
            ])
            for pos, controller in enumerate(participants):
                index = pos + 1
                self.shares_table.append({
                    "from": row.from_node, "to": row.to_node, "request": row.request_key,
                    "participant": controller,
                    "scheme": [self.scheme_config.threshold, n],
                })
                self.send(controller, "/secret", {
                    "from": row.from_node, "to": row.to_node, "request": row.request_key,
                    "index": index,
                    "share": instance.shares[index].hex(),
                    "is_main": controller == row.from_node,
                    "participants": participants[1:] if controller == row.from_node else [],
                })
            report.append({"from": row.from_node, "to": row.to_node,
                           "request": row.request_key, "participants": participants})
        self.log("init_actions", batch_id=self.batch_id, rows=len(report))
        return {"status": "ok", "batch_id": self.batch_id, "report": report}

    def _select_participants(self, main: str, n: int) -> List[str]:
        others = [c for c in self.controller_pool if c != main]
        if self.strategy == "explicit":
            pool = [c for c in self.explicit_participants if c != main]
        elif self.strategy == "round_robin":
            off = self._round_robin_offset % len(others)
            pool = others[off:] + others[:off]
            self._round_robin_offset += n - 1
        else:  # first_n
            pool = others
        if len(pool) < n - 1:
            raise ValueError(f"not enough participants for {main}: need {n - 1}")
        return [main] + pool[: n - 1]

    # -- request protocol --------------------------------------------------

    def ep_action_request(self, query, body):
        ticket = Ticket.from_json(body["ticket"])
        key = (ticket.from_node, ticket.to_node, ticket.request)
        setup = self.setups.get(key)
        if setup is None:
            return self._handle_plain_request(ticket)
        pending = PendingRequest(ticket=ticket, setup=setup, batch_id=self.batch_id)
        if "share" in body and body["share"]:
            pending.collected[MAIN_INDEX] = bytes.fromhex(body["share"])
        self.pending[ticket.reference] = pending
        self.log("request_accepted", reference=ticket.reference, request=ticket.request)
        return {"status": "ok", "reference": ticket.reference}

    def _handle_plain_request(self, ticket: Ticket) -> dict:
        outcome = self.store.authorize_request(ticket.from_node, ticket.to_node, ticket.request)
        if outcome.verdict in (Verdict.ALLOWED_LEVEL0, Verdict.ALLOWED_LEVEL1):
            self.log("request_allowed", reference=ticket.reference,
                     request=ticket.request, verdict=outcome.verdict.value,
                     action=outcome.action)
            self.send(ticket.to_node, "/action-request-result", {
                "reference": ticket.reference, "outcome": "success",
                "action": outcome.action, "appended": list(outcome.appended),
                "ticket": restamp(ticket, self.clock).to_json(),
            })
            self.send(ticket.from_node, "/action-request-result", {
                "reference": ticket.reference, "outcome": "success",
                "detail": f"approved: {outcome.action}",
            })
            return {"status": "ok", "reference": ticket.reference,
                    "verdict": outcome.verdict.value}
        self.log("request_denied", reference=ticket.reference, request=ticket.request,
                 verdict=outcome.verdict.value)
        self._audit(ticket.reference, ticket.request, False,
                    f"denied ({outcome.verdict.value}): "
                    f"{ticket.from_node}->{ticket.to_node} {ticket.request}")
        self.send(ticket.from_node, "/action-request-result", {
            "reference": ticket.reference, "outcome": "failure", "detail": "denied",
        })
        return {"status": "denied", "reference": ticket.reference,
                "verdict": outcome.verdict.value}

    def ep_node_ack(self, query, body):
        ticket = Ticket.from_json(body["ticket"])
        pending = self.pending.get(ticket.reference)
        if pending is None:
            self.log("ack_ignored", reference=ticket.reference, reason="no pending request")
            return {"status": "ignored"}
        if pending.state is not PendingState.AWAITING_ACK:
            return {"status": "ok", "note": "duplicate ack"}
        if not consistent(pending.ticket, ticket):
            self._reject(pending, "ticket mismatch between controller and node")
            self._audit(ticket.reference, pending.ticket.request, False,
                        "ticket consistency failure on node ack")
            return {"status": "rejected"}
        pending.node_ack = ticket
        pending.state = PendingState.COLLECTING_SHARES
        dealer_ticket = restamp(pending.ticket, self.clock)
        for controller in pending.setup.participants[1:]:
            self.send(controller, "/ask-for-shared-secret", {
                "reference": pending.ticket.reference,
                "dealer_ticket": dealer_ticket.to_json(),
                "originating_ticket": pending.ticket.to_json(),
            })
        self.log("shares_solicited", reference=ticket.reference,
                 participants=pending.setup.participants[1:])
        self._maybe_resolve(pending)
        return {"status": "ok"}

    def ep_accept_share(self, query, body):
        reference = body.get("reference", "")
        pending = self.pending.get(reference)
        if pending is None:
            self.log("share_ignored", reference=reference, reason="unknown reference")
            return {"status": "ignored"}
        if pending.state is not PendingState.COLLECTING_SHARES:
            self.log("share_ignored", reference=reference,
                     reason=f"state {pending.state.value}")
            return {"status": "ignored"}
        index = int(body["participant"])
        if index in pending.collected:
            self.log("share_overwritten", reference=reference, participant=index)
        pending.collected[index] = bytes.fromhex(body["share"])
        self._maybe_resolve(pending)
        return {"status": "ok"}

    # -- recovery and resolution (the detection algorithm) -----------------

    def _maybe_resolve(self, pending: PendingRequest):
        t = pending.setup.instance.config.threshold
        if pending.state is PendingState.COLLECTING_SHARES and len(pending.collected) >= t:
            self._resolve(pending)

    def _resolve(self, pending: PendingRequest):
        setup = pending.setup
        config = setup.instance.config
        candidates = [
            s for s in enumerate_minimal_authorized_subsets(config.participants,
                                                            config.threshold)
            if MAIN_INDEX in s
        ]
        reference = pending.ticket.reference
        for subset in candidates:
            if subset in pending.attempted:
                continue
            if any(i not in pending.collected for i in subset):
                continue  # may become attemptable when more shares arrive
            pending.attempted.add(subset)
            try:
                candidate = setup.instance.recover({i: pending.collected[i] for i in subset})
            except ControlNotFoundError:
                self._audit(reference, setup.request, False, str(list(subset)))
                continue
            hit = self.store.lookup_by_secret(setup.from_node, setup.to_node, candidate.hex())
            if hit is None:
                self._audit(reference, setup.request, False, str(list(subset)))
                continue
            action, appended = hit
            self._audit(reference, setup.request, True, str(list(subset)))
            self._deliver_success(pending, action, appended, subset)
            return
        if len(pending.attempted) == len(candidates):
            self._audit(reference, setup.request, False, "terminal reject: invalid key")
            self._reject(pending, "invalid key")

    def _deliver_success(self, pending: PendingRequest, action, appended, subset):
        setup = pending.setup
        reference = pending.ticket.reference
        pending.state = PendingState.RESOLVED_SUCCESS
        self.send(setup.to_node, "/action-request-result", {
            "reference": reference, "outcome": "success",
            "action": action, "appended": list(appended),
            "ticket": restamp(pending.ticket, self.clock).to_json(),
        })
        self.send(setup.participants[0], "/action-request-result", {
            "reference": reference, "outcome": "success", "detail": f"approved: {action}",
        })
        for controller in setup.participants[1:]:
            self.send(controller, "/action-request-result", {
                "reference": reference, "outcome": "success", "detail": "approved",
            })
        self.log("request_resolved", reference=reference, outcome="success",
                 subset=list(subset), action=action)

    def _reject(self, pending: PendingRequest, reason: str):
        reference = pending.ticket.reference
        pending.state = PendingState.RESOLVED_FAILURE
        self.send(pending.setup.participants[0], "/action-request-result", {
            "reference": reference, "outcome": "failure", "detail": reason,
        })
        self.send(pending.setup.to_node, "/action-request-result", {
            "reference": reference, "outcome": "failure", "detail": reason,
        })
        self.log("request_resolved", reference=reference, outcome="failure", reason=reason)

    def _audit(self, reference: str, request: str, is_success: bool, context: str):
        self.store.record_audit(AuditRecord(
            reference_number=reference, request=request, batch_id=self.batch_id,
            is_success=is_success, context_nodes=context,
            created_at=self.clock.now_ms(),
        ))

    # -- introspection -----------------------------------------------------

    def ep_state(self, query, body):
        return {
            "status": "ok",
            "name": self.name,
            "scheme": None if self.scheme_config is None else {
                "scheme": self.scheme_config.kind.value,
                "threshold": self.scheme_config.threshold,
                "participants": self.scheme_config.participants,
            },
            "strategy": self.strategy,
            "batch_id": self.batch_id,
            "shares_table": self.shares_table,
            "actions": [list(r.key) + [r.action_column] for r in self.store.all_actions()],
            "pending": {
                ref: {"state": p.state.value, "request": p.ticket.request,
                      "collected": sorted(p.collected)}
                for ref, p in self.pending.items()
            },
            "forward_log": self.forward_log,
        }

    def ep_audit(self, query, body):
        rows = self.store.list_audit(
            reference_number=query.get("reference") or None,
            batch_id=query.get("batch") or None,
        )
        return {"status": "ok", "audits": [
            {"id": r.id, "reference_number": r.reference_number, "request": r.request,
             "batch_id": r.batch_id, "is_success": r.is_success,
             "context_nodes": r.context_nodes, "created_at": r.created_at}
            for r in rows
        ]}
