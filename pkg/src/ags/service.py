"""HTTP/JSON facade over a governance node.

Mutating endpoints accept client-signed envelopes; reads return JSON
views.  A single write lock inside the node serializes appends, so
concurrent requests see only committed state.

Routes::

    POST /v1/contracts
    GET  /v1/contracts/{id}
    POST /v1/contracts/{id}/proposals
    GET  /v1/contracts/{id}/certificates/{period}
    GET  /v1/proposals/{pid}
    POST /v1/proposals/{pid}/observations
    POST /v1/proposals/{pid}/votes
    POST /v1/proposals/{pid}/resubmit
    GET  /v1/proposals/{pid}/timeline
    GET  /v1/proposals/{pid}/payable
    GET  /v1/anchors?digest=hex
    GET  /v1/healthz
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from ags.codec import CodecError
from ags.consensus import ConsensusError, GovernancePolicy, proposal_key
from ags.crypto.hashes import sha256
from ags.engine import ActionRequest, GovernanceNode
from ags.ledger import LedgerError
from ags.slalang import SlaError

_STATUS = {
    "authentication": 401,
    "authorization": 403,
    "not_found": 404,
    "conflict": 409,
    "evaluation": 422,
    "validation": 400,
}

_ROUTE_ACTIONS = {
    "proposals": "proposal.propose",
    "observations": "proposal.observe",
    "votes": "proposal.vote",
    "resubmit": "proposal.resubmit",
}


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _dispatch_get(node: GovernanceNode, path: str, query: dict) -> dict | list:
    parts = [p for p in path.split("/") if p]
    if parts == ["v1", "healthz"]:
        return node.healthz()
    if parts == ["v1", "anchors"]:
        digest = query.get("digest", [None])[0]
        if not digest:
            raise ApiError(400, "missing digest parameter")
        try:
            return node.anchors_view(digest)
        except ValueError as exc:
            raise ApiError(400, f"bad digest: {exc}") from exc
    if len(parts) == 3 and parts[:2] == ["v1", "contracts"]:
        return node.contract_view(parts[2])
    if len(parts) == 5 and parts[:2] == ["v1", "contracts"] and parts[3] == "certificates":
        return node.certificate_view(parts[2], parts[4])
    if len(parts) == 3 and parts[:2] == ["v1", "proposals"]:
        return node.proposal_view(parts[2])
    if len(parts) == 4 and parts[:2] == ["v1", "proposals"]:
        if parts[3] == "timeline":
            return node.timeline_view(parts[2])
        if parts[3] == "payable":
            return node.payable_view(parts[2])
    raise ApiError(404, f"no such resource: {path}")


def _expected_action(path: str) -> str:
    parts = [p for p in path.split("/") if p]
    if parts == ["v1", "contracts"]:
        return "contract.open"
    if len(parts) == 4 and parts[:2] == ["v1", "contracts"] and parts[3] == "proposals":
        return "proposal.propose"
    if len(parts) == 4 and parts[:2] == ["v1", "proposals"]:
        action = _ROUTE_ACTIONS.get(parts[3])
        if action and action != "proposal.propose":
            return action
    raise ApiError(404, f"no such endpoint: {path}")


def _dispatch_post(node: GovernanceNode, path: str, body: dict) -> dict:
    action = _expected_action(path)
    try:
        request = ActionRequest(
            actor=body["actor"],
            action=body.get("action", action),
            payload=body["payload"],
            nonce=int(body["nonce"]),
            pubkey_hex=body["pubkey"],
            sig_hex=body["sig"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ApiError(400, f"malformed envelope: {exc}") from exc
    if request.action != action:
        raise ApiError(400, f"action {request.action!r} does not match endpoint")
    envelope = node.submit(request)
    result = {"seq": envelope.seq, "ts": envelope.ts}
    payload = request.payload
    if action == "contract.open":
        policy = GovernancePolicy.from_json(payload["policy"])
        cid = sha256(policy.policy_bytes() + payload["program"].encode())
        result["contract_id"] = cid.hex()
    if action in ("proposal.propose", "proposal.resubmit"):
        report = payload["report"]
        key = proposal_key(bytes.fromhex(report["contract_id"]), report["period_id"])
        result["proposal_id"] = key
        result["proposal"] = node.proposal_view(key)
    if action in ("proposal.vote", "proposal.observe"):
        key = proposal_key(bytes.fromhex(payload["contract_id"]), payload["period_id"])
        result["proposal"] = node.proposal_view(key)
    return result


class GovernanceHandler(BaseHTTPRequestHandler):
    node: GovernanceNode  # set by serve()
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _handle(self, method: str) -> None:
        parsed = urlparse(self.path)
        try:
            if method == "GET":
                result = _dispatch_get(self.node, parsed.path, parse_qs(parsed.query))
                self._send(200, result)
                return
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length)
            try:
                body = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ApiError(400, f"malformed JSON body: {exc}") from exc
            result = _dispatch_post(self.node, parsed.path, body)
            self._send(200, result)
        except ApiError as exc:
            self._send(exc.status, {"error": exc.message})
        except ConsensusError as exc:
            self._send(_STATUS.get(exc.code, 400), {"error": str(exc)})
        except (CodecError, SlaError, LedgerError, ValueError) as exc:
            self._send(400, {"error": str(exc)})

    def do_GET(self):
        self._handle("GET")

    def do_POST(self):
        self._handle("POST")


def make_server(node: GovernanceNode, addr: str = "127.0.0.1:0") -> ThreadingHTTPServer:
    host, _, port = addr.rpartition(":")
    handler = type("BoundHandler", (GovernanceHandler,), {"node": node})
    return ThreadingHTTPServer((host or "127.0.0.1", int(port)), handler)


def serve(node: GovernanceNode, addr: str) -> None:
    server = make_server(node, addr)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port} (store {node.store_dir})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
