"""The application core: signed envelopes in, governed state out.

``GovernanceNode`` owns an event store, an anchor chain, and the consensus
book.  A mutating action arrives as a client-signed envelope, is verified,
applied to the book (which anchors the relevant digests), and appended to
the store.  The store is the only source of truth: restarting a node
replays it and reconstructs book, chain, and nonce table byte for byte.
The chain file on disk is a derived export, rewritten whenever replay
finds it stale.

All clock reads happen exactly once, at live append time, and are recorded
in the envelope, so replay is deterministic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from ags.codec import (
    CodecError,
    payload_digest as compute_payload_digest,
    report_from_json,
    report_to_json,
)
from ags.consensus import (
    AuthenticationError,
    Certificate,
    CertificateVote,
    ConflictError,
    GovernanceBook,
    GovernancePolicy,
    NotFoundError,
    Proposal,
    TimelineEvent,
    proposal_key,
    verify_certificate,
)
from ags.crypto.base58 import address_matches
from ags.crypto.curves import CurveParams, get_curve, parse_point
from ags.crypto.ecdsa import PublicKey, Signature, verify
from ags.crypto.hashes import sha256
from ags.decimals import format_decimal
from ags.ledger import append_chain_file, block_line, find_entry, now_ts, save_chain, verify_chain
from ags.slalang import PayableStatement, explain, payable_digest
from ags.store import EventStore, SignedEnvelope, envelope_signing_digest, seal_envelope

STORE_FILE = "events.jsonl"
CHAIN_FILE = "chain.jsonl"

ACTIONS = {
    "contract.open",
    "proposal.propose",
    "proposal.observe",
    "proposal.vote",
    "proposal.resubmit",
}


@dataclass(frozen=True)
class ActionRequest:
    """A client-signed mutating request, before the node seals it."""

    actor: str
    action: str
    payload: dict
    nonce: int
    pubkey_hex: str
    sig_hex: str


class GovernanceNode:
    """Event-sourced node: verify, apply, append; replay on start."""

    def __init__(self, store_dir: str | Path, curve: CurveParams | str = "secp256k1"):
        self.curve = get_curve(curve) if isinstance(curve, str) else curve
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self.store_path = self.store_dir / STORE_FILE
        self.chain_path = self.store_dir / CHAIN_FILE
        self._write_lock = threading.Lock()
        self.store = EventStore(self.store_path, self.curve, recover=True)
        self.book = GovernanceBook(self.curve)
        self.nonces: dict[str, int] = {}
        self._last_ts = ""
        for envelope in self.store.records:
            self._apply(envelope)
            self.nonces[envelope.actor] = envelope.nonce
            self._last_ts = envelope.ts
        self._export_chain_if_stale()

    # -- envelope intake -------------------------------------------------------

    def submit(self, request: ActionRequest) -> SignedEnvelope:
        """Verify a signed action, apply it, and persist the envelope."""
        if request.action not in ACTIONS:
            raise NotFoundError(f"unknown action {request.action!r}")
        try:
            pubkey = PublicKey(
                parse_point(bytes.fromhex(request.pubkey_hex), self.curve), self.curve
            )
            sig = Signature.from_bytes(bytes.fromhex(request.sig_hex), self.curve)
        except (ValueError, TypeError) as exc:
            raise AuthenticationError(f"malformed credentials: {exc}") from exc
        if not address_matches(pubkey, request.actor):
            raise AuthenticationError("public key does not match actor address")
        digest = compute_payload_digest(request.payload)
        if not verify(pubkey, envelope_signing_digest(digest, request.nonce), sig):
            raise AuthenticationError("envelope signature invalid")
        with self._write_lock:
            last = self.nonces.get(request.actor, 0)
            if request.nonce <= last:
                raise ConflictError(
                    f"nonce {request.nonce} already used (last accepted {last})"
                )
            ts = now_ts()
            if ts <= self._last_ts:
                ts = self._last_ts  # monotonized service clock
            envelope = seal_envelope(
                seq=self.store.height + 1,
                ts=ts,
                actor=request.actor,
                action=request.action,
                payload=request.payload,
                nonce=request.nonce,
                pubkey=pubkey,
                sig=sig,
                prev_record_digest=self.store.tip_digest,
            )
            chain_before = len(self.book.chain)
            self._apply(envelope)  # raises without state change on failure
            self.store.append(envelope)
            self.nonces[request.actor] = request.nonce
            self._last_ts = ts
            for block in self.book.chain.blocks[chain_before:]:
                append_chain_file(block, self.chain_path)
        return envelope

    # -- deterministic dispatch --------------------------------------------------

    def _apply(self, envelope: SignedEnvelope) -> None:
        payload = envelope.payload
        action = envelope.action
        try:
            if action == "contract.open":
                policy = GovernancePolicy.from_json(payload["policy"])
                self.book.open_contract(
                    policy,
                    payload["program"],
                    envelope.actor,
                    envelope.pubkey,
                    self._sig(payload["event_sig"]),
                    envelope.ts,
                )
            elif action == "proposal.propose":
                report = report_from_json(payload["report"])
                self.book.propose(
                    report.contract_id,
                    report,
                    envelope.actor,
                    envelope.pubkey,
                    self._sig(payload["report_sig"]),
                    self._sig(payload["event_sig"]),
                    envelope.ts,
                )
            elif action == "proposal.observe":
                self.book.observe(
                    bytes.fromhex(payload["contract_id"]),
                    payload["period_id"],
                    payload["text"],
                    envelope.actor,
                    envelope.pubkey,
                    self._sig(payload["event_sig"]),
                    int(payload["expected_seq"]),
                    envelope.ts,
                )
            elif action == "proposal.vote":
                transition = payload.get("transition_sig")
                self.book.cast_vote(
                    bytes.fromhex(payload["contract_id"]),
                    payload["period_id"],
                    int(payload["version"]),
                    payload["decision"],
                    envelope.actor,
                    envelope.pubkey,
                    self._sig(payload["vote_sig"]),
                    self._sig(payload["event_sig"]),
                    int(payload["expected_seq"]),
                    envelope.ts,
                    transition_sig=self._sig(transition) if transition else None,
                )
            elif action == "proposal.resubmit":
                report = report_from_json(payload["report"])
                self.book.resubmit(
                    report.contract_id,
                    report,
                    envelope.actor,
                    envelope.pubkey,
                    self._sig(payload["report_sig"]),
                    self._sig(payload["event_sig"]),
                    int(payload["expected_seq"]),
                    envelope.ts,
                )
            else:
                raise NotFoundError(f"unknown action {action!r}")
        except (KeyError, TypeError) as exc:
            raise CodecError(f"malformed {action} payload: {exc}") from exc

    def _sig(self, sig_hex: str) -> Signature:
        try:
            return Signature.from_bytes(bytes.fromhex(sig_hex), self.curve)
        except (ValueError, TypeError) as exc:
            raise AuthenticationError(f"malformed signature: {exc}") from exc

    # -- views ------------------------------------------------------------------

    def state_digest(self) -> bytes:
        nonce_bytes = b"".join(
            actor.encode() + self.nonces[actor].to_bytes(8, "big")
            for actor in sorted(self.nonces)
        )
        return sha256(
            self.book.state_digest() + self.store.tip_digest + nonce_bytes
        )

    def healthz(self) -> dict:
        return {
            "store_height": self.store.height,
            "chain_height": len(self.book.chain),
            "chain_tip": self.book.chain.tip_digest.hex(),
            "nonces": dict(sorted(self.nonces.items())),
        }

    def contract_view(self, contract_id_hex: str) -> dict:
        contract = self.book.contract(bytes.fromhex(contract_id_hex))
        return {
            "contract_id": contract_id_hex,
            "policy": contract.policy.to_json(),
            "program": contract.program.source,
            "program_digest": contract.program.digest.hex(),
            "proposals": {
                period: {
                    "proposal_id": proposal_key(contract.contract_id, period),
                    "state": proposal.state,
                    "current_version": proposal.current_version,
                }
                for period, proposal in sorted(contract.proposals.items())
            },
        }

    def proposal_view(self, key: str) -> dict:
        proposal = self.book.proposal_by_key(key)
        return proposal_to_json(proposal)

    def timeline_view(self, key: str) -> list[dict]:
        proposal = self.book.proposal_by_key(key)
        return [event_to_json(e) for e in proposal.events]

    def payable_view(self, key: str) -> dict:
        """Dry-run evaluation of the current version, with its trace."""
        proposal = self.book.proposal_by_key(key)
        contract = self.book.contract(proposal.contract_id)
        statement = self.book.dry_run_payable(proposal.contract_id, proposal.period_id)
        report = proposal.version_entry(proposal.current_version).report
        trace = explain(contract.program, report.metrics)
        return {
            "proposal_id": key,
            "version": proposal.current_version,
            "statement": payable_to_json(statement),
            "trace": [
                {
                    "label": entry.label,
                    "value": format_decimal(entry.value)
                    if not isinstance(entry.value, bool)
                    else entry.value,
                }
                for entry in trace
            ],
        }

    def certificate_view(self, contract_id_hex: str, period_id: str) -> dict:
        proposal = self.book.proposal(bytes.fromhex(contract_id_hex), period_id)
        if proposal.certificate is None:
            raise NotFoundError(f"no certificate for period {period_id!r}")
        ok, reason = verify_certificate(
            proposal.certificate,
            self.book.chain,
            self.book.contract(proposal.contract_id).policy,
        )
        view = certificate_to_json(proposal.certificate)
        view["verified"] = ok
        view["verification_reason"] = reason
        if proposal.payable is not None:
            view["payable"] = payable_to_json(proposal.payable)
        return view

    def anchors_view(self, digest_hex: str) -> list[dict]:
        digest = bytes.fromhex(digest_hex)
        hits = find_entry(self.book.chain, digest)
        out = []
        for height, index in hits:
            entry = self.book.chain.blocks[height].entries[index]
            out.append(
                {"height": height, "index": index, "kind": entry.kind, "ref": entry.ref}
            )
        return out

    # -- maintenance ------------------------------------------------------------

    def _export_chain_if_stale(self) -> None:
        expected = b"".join(block_line(b) for b in self.book.chain.blocks)
        current = self.chain_path.read_bytes() if self.chain_path.exists() else b""
        if current != expected:
            save_chain(self.book.chain, self.chain_path)

    def verify_own_chain(self) -> int | None:
        return verify_chain(self.book.chain)


def replay_node(store_dir: str | Path, curve: CurveParams | str) -> GovernanceNode:
    """Rebuild a node purely from its store directory."""
    return GovernanceNode(store_dir, curve)


# --- JSON views ---------------------------------------------------------------


def event_to_json(event: TimelineEvent) -> dict:
    return {
        "seq": event.seq,
        "kind": event.kind,
        "actor": event.actor,
        "payload_digest": event.payload_digest.hex(),
        "signature": event.signature.to_bytes(event.pubkey.curve).hex(),
        "pubkey": event.pubkey.to_bytes().hex(),
        "timestamp": event.timestamp,
        "digest": event.digest().hex(),
    }


def vote_to_json(vote) -> dict:
    return {
        "voter": vote.voter,
        "version": vote.version,
        "decision": vote.decision,
        "signature": vote.signature.to_bytes(vote.pubkey.curve).hex(),
        "pubkey": vote.pubkey.to_bytes().hex(),
        "timestamp": vote.timestamp,
    }


def observation_to_json(obs) -> dict:
    return {
        "author": obs.author,
        "version": obs.version,
        "text": obs.text,
        "signature": obs.signature.to_bytes(obs.pubkey.curve).hex(),
        "pubkey": obs.pubkey.to_bytes().hex(),
        "timestamp": obs.timestamp,
        "seq": obs.seq,
    }


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "contract_id": cert.contract_id.hex(),
        "period_id": cert.period_id,
        "final_version": cert.final_version,
        "report_digest": cert.report_digest.hex(),
        "payable_digest": cert.payable_digest.hex(),
        "votes": [
            {
                "voter": v.voter,
                "decision": v.decision,
                "signature": v.signature.to_bytes(v.pubkey.curve).hex(),
                "pubkey": v.pubkey.to_bytes().hex(),
            }
            for v in cert.votes
        ],
        "timeline_digest": cert.timeline_digest.hex(),
        "anchor_ref": cert.anchor_ref,
        "certificate_digest": cert.digest().hex(),
    }


def certificate_from_json(obj: dict, curve: CurveParams) -> Certificate:
    try:
        return Certificate(
            contract_id=bytes.fromhex(obj["contract_id"]),
            period_id=obj["period_id"],
            final_version=int(obj["final_version"]),
            report_digest=bytes.fromhex(obj["report_digest"]),
            payable_digest=bytes.fromhex(obj["payable_digest"]),
            votes=tuple(
                CertificateVote(
                    voter=v["voter"],
                    decision=v["decision"],
                    signature=Signature.from_bytes(bytes.fromhex(v["signature"]), curve),
                    pubkey=PublicKey(parse_point(bytes.fromhex(v["pubkey"]), curve), curve),
                )
                for v in obj["votes"]
            ),
            timeline_digest=bytes.fromhex(obj["timeline_digest"]),
            anchor_ref=obj["anchor_ref"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CodecError(f"malformed certificate object: {exc}") from exc


def payable_to_json(statement: PayableStatement) -> dict:
    return {
        "line_items": [
            {"label": label, "amount": format_decimal(amount)}
            for label, amount in statement.line_items
        ],
        "total": format_decimal(statement.total),
        "input_digest": statement.input_digest.hex(),
        "program_digest": statement.program_digest.hex(),
        "payable_digest": payable_digest(statement).hex(),
    }


def proposal_to_json(proposal: Proposal) -> dict:
    view = {
        "proposal_id": proposal_key(proposal.contract_id, proposal.period_id),
        "contract_id": proposal.contract_id.hex(),
        "period_id": proposal.period_id,
        "state": proposal.state,
        "current_version": proposal.current_version,
        "versions": [
            {
                "version": i + 1,
                "report": report_to_json(entry.report),
                "report_digest": entry.digest.hex(),
                "anchor_ref": entry.anchor_ref,
            }
            for i, entry in enumerate(proposal.versions)
        ],
        "votes": {
            str(version): [vote_to_json(v) for v in votes]
            for version, votes in sorted(proposal.votes.items())
        },
        "observations": {
            str(version): [observation_to_json(o) for o in observations]
            for version, observations in sorted(proposal.observations.items())
        },
        "next_seq": proposal.next_seq,
    }
    if proposal.certificate is not None:
        view["certificate"] = certificate_to_json(proposal.certificate)
    return view
