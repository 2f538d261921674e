"""Controller service: holds request-bound shares and raises action requests."""
import random
from typing import Dict, Optional, Tuple

from .service import ServiceBase
from .tickets import Ticket, consistent, new_ticket


class Controller(ServiceBase):
    def __init__(self, name, registry, transport, dealer_name: str = "dealer",
                 rng: Optional[random.Random] = None, clock=None, events=None,
                 auto_respond: bool = False):
        super().__init__(name, registry, transport, clock=clock, events=events)
        self.dealer_name = dealer_name
        self.rng = rng or random.Random()
        self.auto_respond = auto_respond
        # (from, to, request) -> {index, share, is_main, participants}
        self.internal: Dict[Tuple[str, str, str], dict] = {}
        self.solicitations: Dict[str, dict] = {}
        self.statuses: Dict[str, dict] = {}
        self.routes.update({
            ("POST", "/secret"): self.ep_secret,
            ("POST", "/command/action-request"): self.ep_raise_request,
            ("POST", "/ask-for-shared-secret"): self.ep_solicitation,
            ("POST", "/command/respond-share"): self.ep_respond_share,
            ("POST", "/action-request-result"): self.ep_result,
            ("POST", "/reset"): self.ep_reset,
            ("GET", "/state"): self.ep_state,
        })

    # -- share storage (and the compromise path) ---------------------------

    def ep_secret(self, query, body):
        key = (body["from"], body["to"], body["request"])
        try:
            share = bytes.fromhex(body["share"])
        except ValueError:
            return {"status": "error", "error": "share is not valid hex"}
        existing = self.internal.get(key)
        if existing is not None:
            if len(share) != len(existing["share"]):
                return {"status": "error", "error": "share length mismatch"}
            existing["share"] = share
            self.log("share_overwritten", request=key[2])
            return {"status": "ok", "overwritten": True}
        self.internal[key] = {
            "index": int(body["index"]),
            "share": share,
            "is_main": bool(body.get("is_main")),
            "participants": list(body.get("participants", [])),
        }
        self.log("share_stored", request=key[2], index=int(body["index"]),
                 is_main=bool(body.get("is_main")))
        return {"status": "ok"}

    def ep_reset(self, query, body):
        self.internal.clear()
        self.solicitations.clear()
        self.statuses.clear()
        return {"status": "ok"}

    # -- raising requests --------------------------------------------------

    def ep_raise_request(self, query, body):
        request = body.get("request", "")
        to = body.get("to")
        rows = [
            (key, row) for key, row in self.internal.items()
            if key[0] == self.name and key[2] == request and (to is None or key[1] == to)
        ]
        if rows:
            (key, row) = rows[0]
            if not row["is_main"]:
                return {"status": "error", "error": "only the main participant can raise requests"}
            ticket = new_ticket(self.clock, self.rng, self.name, key[1], request)
            self.statuses[ticket.reference] = {"status": "pending", "request": request}
            self.send(self.dealer_name, "/action-request", {
                "ticket": ticket.to_json(), "share": row["share"].hex(),
            })
            self.send(key[1], "/action-request", {"ticket": ticket.to_json()})
            self.log("request_raised", reference=ticket.reference, request=request)
            return {"status": "ok", "reference": ticket.reference}
        if to is None:
            return {"status": "error", "error": f"unknown request {request!r}"}
        # plain request: no share involved, the dealer runs the level cascade
        ticket = new_ticket(self.clock, self.rng, self.name, to, request)
        self.statuses[ticket.reference] = {"status": "pending", "request": request}
        self.send(self.dealer_name, "/action-request", {"ticket": ticket.to_json()})
        self.send(to, "/action-request", {"ticket": ticket.to_json()})
        self.log("request_raised", reference=ticket.reference, request=request, plain=True)
        return {"status": "ok", "reference": ticket.reference}

    # -- responding with shares --------------------------------------------

    def ep_solicitation(self, query, body):
        dealer_ticket = Ticket.from_json(body["dealer_ticket"])
        originating = Ticket.from_json(body["originating_ticket"])
        if not consistent(dealer_ticket, originating):
            self.log("solicitation_rejected", reference=dealer_ticket.reference,
                     reason="inconsistent tickets")
            return {"status": "ignored"}
        key = (dealer_ticket.from_node, dealer_ticket.to_node, dealer_ticket.request)
        if key not in self.internal:
            self.log("solicitation_rejected", reference=dealer_ticket.reference,
                     reason="no share held")
            return {"status": "ignored"}
        reference = dealer_ticket.reference
        if reference not in self.solicitations:
            self.solicitations[reference] = {
                "ticket": dealer_ticket, "key": key, "responded": False,
            }
            self.log("solicitation_received", reference=reference,
                     request=dealer_ticket.request)
        if self.auto_respond:
            return self.ep_respond_share(query, {"reference": reference})
        return {"status": "ok"}

    def ep_respond_share(self, query, body):
        reference = body.get("reference", "")
        sol = self.solicitations.get(reference)
        if sol is None:
            return {"status": "error", "error": f"unknown reference {reference!r}"}
        if sol["responded"]:
            return {"status": "ok", "note": "already responded"}
        row = self.internal[sol["key"]]
        self.send(self.dealer_name, "/accept-shares", {
            "reference": reference,
            "participant": row["index"],
            "share": row["share"].hex(),
        })
        sol["responded"] = True
        self.log("share_responded", reference=reference, index=row["index"])
        return {"status": "ok"}

    # -- results -----------------------------------------------------------

    def ep_result(self, query, body):
        reference = body.get("reference", "")
        outcome = body.get("outcome", "")
        status = "approved" if outcome == "success" else "rejected"
        entry = self.statuses.setdefault(reference, {"status": "orphan"})
        entry.update({"status": status, "detail": body.get("detail", "")})
        sol = self.solicitations.get(reference)
        if sol is not None and outcome == "success":
            sol["responded"] = True  # grey out the respond affordance
        self.log("result_received", reference=reference, outcome=outcome)
        return {"status": "ok"}

    def ep_state(self, query, body):
        return {
            "status": "ok",
            "name": self.name,
            "shares": [
                {"from": k[0], "to": k[1], "request": k[2], "index": v["index"],
                 "is_main": v["is_main"], "participants": v["participants"],
                 "share": v["share"].hex()}
                for k, v in sorted(self.internal.items())
            ],
            "solicitations": {
                ref: {"request": s["ticket"].request, "responded": s["responded"]}
                for ref, s in self.solicitations.items()
            },
            "statuses": self.statuses,
            "forward_log": self.forward_log,
        }
