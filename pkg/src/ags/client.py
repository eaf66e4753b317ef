"""Action client: builds, signs, and submits envelopes.

Works identically against an in-process node (embedded mode, used by the
CLI and the acceptance suite) and a remote HTTP endpoint.  All signing
happens here, on the client side, with the caller's key; the node never
sees a private key.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass

from ags.codec import MeasurementReport, payload_digest, report_digest, report_to_json
from ags.consensus import (
    ConsensusError,
    GovernancePolicy,
    proposal_key,
    sha256,
    vote_bytes,
)
from ags.engine import ActionRequest, GovernanceNode
from ags.signing import Actor
from ags.store import envelope_signing_digest


class TransportError(Exception):
    """Endpoint unreachable or returned a non-JSON failure."""


class RemoteActionError(Exception):
    """The node rejected the action; mirrors the server's status bucket."""

    def __init__(self, status: int, message: str):
        super().__init__(f"{status}: {message}")
        self.status = status


class EmbeddedTransport:
    """Direct calls into an in-process node."""

    def __init__(self, node: GovernanceNode):
        self.node = node

    def submit(self, request: ActionRequest) -> dict:
        try:
            envelope = self.node.submit(request)
        except ConsensusError as exc:
            raise RemoteActionError(_status_for(exc.code), str(exc)) from exc
        return {"seq": envelope.seq, "ts": envelope.ts}

    def get(self, path: str) -> dict | list:
        node = self.node
        parts = path.strip("/").split("/")
        try:
            if parts == ["v1", "healthz"]:
                return node.healthz()
            if parts[:2] == ["v1", "contracts"] and len(parts) == 3:
                return node.contract_view(parts[2])
            if parts[:2] == ["v1", "contracts"] and len(parts) == 5 and parts[3] == "certificates":
                return node.certificate_view(parts[2], parts[4])
            if parts[:2] == ["v1", "proposals"] and len(parts) == 3:
                return node.proposal_view(parts[2])
            if parts[:2] == ["v1", "proposals"] and len(parts) == 4 and parts[3] == "timeline":
                return node.timeline_view(parts[2])
            if parts[:2] == ["v1", "proposals"] and len(parts) == 4 and parts[3] == "payable":
                return node.payable_view(parts[2])
            if parts[0] == "v1" and parts[1].startswith("anchors?digest="):
                return node.anchors_view(parts[1].split("=", 1)[1])
        except ConsensusError as exc:
            raise RemoteActionError(_status_for(exc.code), str(exc)) from exc
        raise RemoteActionError(404, f"no such view: {path}")


class HttpTransport:
    """urllib-based client for a running service."""

    def __init__(self, endpoint: str, timeout: float = 10.0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout

    def _request(self, method: str, path: str, body: dict | None = None) -> dict | list:
        url = self.endpoint + path
        data = json.dumps(body).encode() if body is not None else None
        req = urllib.request.Request(
            url, data=data, method=method, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.loads(resp.read())
        except urllib.error.HTTPError as exc:
            try:
                detail = json.loads(exc.read()).get("error", exc.reason)
            except Exception:
                detail = exc.reason
            raise RemoteActionError(exc.code, str(detail)) from exc
        except (urllib.error.URLError, OSError) as exc:
            raise TransportError(f"endpoint unreachable: {exc}") from exc

    def submit(self, request: ActionRequest) -> dict:
        body = {
            "actor": request.actor,
            "action": request.action,
            "payload": request.payload,
            "nonce": request.nonce,
            "pubkey": request.pubkey_hex,
            "sig": request.sig_hex,
        }
        path = _SUBMIT_PATHS[request.action](request.payload)
        return self._request("POST", path, body)

    def get(self, path: str) -> dict | list:
        return self._request("GET", path)


def _status_for(code: str) -> int:
    return {
        "authentication": 401,
        "authorization": 403,
        "not_found": 404,
        "conflict": 409,
        "evaluation": 422,
        "validation": 400,
    }.get(code, 400)


def _proposal_path(payload: dict) -> str:
    key = proposal_key(bytes.fromhex(payload["contract_id"]), payload["period_id"])
    return key


_SUBMIT_PATHS = {
    "contract.open": lambda p: "/v1/contracts",
    "proposal.propose": lambda p: (
        f"/v1/contracts/{p['report']['contract_id']}/proposals"
    ),
    "proposal.observe": lambda p: f"/v1/proposals/{_proposal_path(p)}/observations",
    "proposal.vote": lambda p: f"/v1/proposals/{_proposal_path(p)}/votes",
    "proposal.resubmit": lambda p: (
        "/v1/proposals/"
        + proposal_key(
            bytes.fromhex(p["report"]["contract_id"]), p["report"]["period_id"]
        )
        + "/resubmit"
    ),
}


@dataclass
class ActionClient:
    """Signs and submits consensus actions for one actor."""

    transport: EmbeddedTransport | HttpTransport
    actor: Actor

    def _next_nonce(self) -> int:
        health = self.transport.get("/v1/healthz")
        return int(health.get("nonces", {}).get(self.actor.address, 0)) + 1

    def _signed_request(self, action: str, payload: dict) -> ActionRequest:
        nonce = self._next_nonce()
        digest = payload_digest(payload)
        sig = self.actor.sign_digest(envelope_signing_digest(digest, nonce))
        return ActionRequest(
            actor=self.actor.address,
            action=action,
            payload=payload,
            nonce=nonce,
            pubkey_hex=self.actor.pubkey.to_bytes().hex(),
            sig_hex=sig.to_bytes(self.actor.curve).hex(),
        )

    def submit(self, action: str, payload: dict) -> dict:
        return self.transport.submit(self._signed_request(action, payload))

    # -- actions ---------------------------------------------------------------

    def open_contract(self, policy: GovernancePolicy, program: str) -> str:
        contract_id = sha256(policy.policy_bytes() + program.encode())
        event_sig = self.actor.sign_event("contract_opened", contract_id, 1)
        self.submit(
            "contract.open",
            {
                "policy": policy.to_json(),
                "program": program,
                "event_sig": event_sig.to_bytes(self.actor.curve).hex(),
            },
        )
        return contract_id.hex()

    def propose(self, report: MeasurementReport) -> str:
        digest = report_digest(report)
        payload = {
            "report": report_to_json(report),
            "report_sig": self.actor.sign_report(report).to_bytes(self.actor.curve).hex(),
            "event_sig": self.actor.sign_event("proposed", digest, 1)
            .to_bytes(self.actor.curve)
            .hex(),
        }
        self.submit("proposal.propose", payload)
        return proposal_key(report.contract_id, report.period_id)

    def observe(self, contract_id_hex: str, period_id: str, text: str) -> dict:
        key = proposal_key(bytes.fromhex(contract_id_hex), period_id)
        view = self.transport.get(f"/v1/proposals/{key}")
        seq = int(view["next_seq"])
        payload = {
            "contract_id": contract_id_hex,
            "period_id": period_id,
            "text": text,
            "expected_seq": seq,
            "event_sig": self.actor.sign_observation_event(text, seq)
            .to_bytes(self.actor.curve)
            .hex(),
        }
        return self.submit("proposal.observe", payload)

    def vote(
        self, contract_id_hex: str, period_id: str, decision: str, version: int | None = None
    ) -> dict:
        """Vote on the displayed version, forecasting any transition."""
        contract_id = bytes.fromhex(contract_id_hex)
        key = proposal_key(contract_id, period_id)
        view = self.transport.get(f"/v1/proposals/{key}")
        contract = self.transport.get(f"/v1/contracts/{contract_id_hex}")
        policy = GovernancePolicy.from_json(contract["policy"])
        current = int(view["current_version"])
        version = current if version is None else version
        digest_hex = None
        for entry in view["versions"]:
            if entry["version"] == version:
                digest_hex = entry["report_digest"]
        if digest_hex is None:
            digest_hex = view["versions"][-1]["report_digest"]
        digest = bytes.fromhex(digest_hex)
        seq = int(view["next_seq"])

        vb = vote_bytes(contract_id, period_id, version, decision, digest)
        vote_sig = self.actor.sign_digest(sha256(vb))
        event_sig = self.actor.sign_event("voted", sha256(vb), seq)
        payload = {
            "contract_id": contract_id_hex,
            "period_id": period_id,
            "version": version,
            "decision": decision,
            "expected_seq": seq,
            "vote_sig": vote_sig.to_bytes(self.actor.curve).hex(),
            "event_sig": event_sig.to_bytes(self.actor.curve).hex(),
        }
        outcome = _forecast_from_view(policy, view, self.actor.address, decision, version)
        if outcome in ("finalize", "reject"):
            kind = "finalized" if outcome == "finalize" else "rejected"
            payload["transition_sig"] = (
                self.actor.sign_event(kind, digest, seq + 1).to_bytes(self.actor.curve).hex()
            )
        return self.submit("proposal.vote", payload)

    def resubmit(self, report: MeasurementReport) -> dict:
        key = proposal_key(report.contract_id, report.period_id)
        view = self.transport.get(f"/v1/proposals/{key}")
        seq = int(view["next_seq"])
        digest = report_digest(report)
        payload = {
            "report": report_to_json(report),
            "report_sig": self.actor.sign_report(report).to_bytes(self.actor.curve).hex(),
            "event_sig": self.actor.sign_event("resubmitted", digest, seq)
            .to_bytes(self.actor.curve)
            .hex(),
            "expected_seq": seq,
        }
        return self.submit("proposal.resubmit", payload)


def _forecast_from_view(
    policy: GovernancePolicy, view: dict, voter: str, decision: str, version: int
) -> str:
    """The decision rule, computed from the fetched proposal view."""
    if version != int(view["current_version"]):
        return "pending"
    votes = view.get("votes", {}).get(str(version), [])
    approve = sum(policy.weight_of(v["voter"]) for v in votes if v["decision"] == "approve")
    reject = sum(policy.weight_of(v["voter"]) for v in votes if v["decision"] == "reject")
    if decision == "approve":
        approve += policy.weight_of(voter)
    else:
        reject += policy.weight_of(voter)
    if approve >= policy.approval_threshold:
        return "finalize"
    if policy.total_weight - reject < policy.approval_threshold:
        return "reject"
    return "pending"
