"""Weighted, signed consensus over versioned measurement reports.

A contract binds a governance policy (participants, voting weights,
approval threshold) to a rule program.  Participants propose report
versions, observe, and cast signed votes; a version finalizes when the
approving weight reaches the threshold and dies when approval becomes
arithmetically unreachable, after which the proposer may resubmit an
edited version.  Finalization evaluates the rule program and issues a
certificate binding report, payable, votes, and timeline to the anchor
chain.

Every state transition is driven by client-side signatures: actions are
signed over fixed byte layouts, and each timeline event is signed by its
actor over (kind, payload digest, sequence number).  Engine-derived
transitions (rejected, finalized) are signed by the voter whose vote
triggered them; clients forecast the transition with the same decision
rule the engine applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from ags.codec import MeasurementReport, report_digest
from ags.crypto.base58 import Base58Error, decode_address
from ags.crypto.curves import CurveParams
from ags.crypto.ecdsa import PublicKey, Signature, verify
from ags.crypto.hashes import DIGEST_LEN, hash160, sha256
from ags.ledger import AnchorEntry, Chain, find_entry
from ags.slalang import PayableStatement, Program, SlaError, evaluate, parse, payable_digest

# --- errors ---------------------------------------------------------------


class ConsensusError(Exception):
    """Base class; ``code`` maps to the HTTP facade's status buckets."""

    code = "validation"


class AuthenticationError(ConsensusError):
    code = "authentication"


class AuthorizationError(ConsensusError):
    code = "authorization"


class ConflictError(ConsensusError):
    code = "conflict"


class StateError(ConsensusError):
    code = "conflict"


class NotFoundError(ConsensusError):
    code = "not_found"


class EvaluationError(ConsensusError):
    code = "evaluation"


# --- signing layouts --------------------------------------------------------

EVENT_KINDS = {
    "contract_opened": 0x10,
    "proposed": 0x11,
    "observed": 0x12,
    "voted": 0x13,
    "rejected": 0x14,
    "resubmitted": 0x15,
    "finalized": 0x16,
}

DECISION_BYTES = {"approve": 0x01, "reject": 0x00}


def vote_bytes(
    contract_id: bytes, period_id: str, version: int, decision: str, rep_digest: bytes
) -> bytes:
    """The exact layout a vote signature covers (shared across components)."""
    return (
        contract_id
        + period_id.encode()
        + version.to_bytes(4, "big")
        + bytes([DECISION_BYTES[decision]])
        + rep_digest
    )


def event_signing_digest(kind: str, payload_digest: bytes, seq: int) -> bytes:
    """Events are signed over kind byte || payload digest || sequence."""
    return sha256(bytes([EVENT_KINDS[kind]]) + payload_digest + seq.to_bytes(8, "big"))


def observation_digest(text: str) -> bytes:
    return sha256(text.encode())


# --- domain types -----------------------------------------------------------


@dataclass(frozen=True)
class GovernancePolicy:
    """Participants with voting weights, an approval threshold, proposers."""

    participants: dict[str, int]
    approval_threshold: int
    proposer_roles: frozenset[str]

    def __post_init__(self) -> None:
        if len(self.participants) < 2:
            raise ConsensusError("a policy needs at least two participants")
        for address, weight in self.participants.items():
            try:
                decode_address(address)
            except Base58Error as exc:
                raise ConsensusError(f"invalid participant address: {exc}") from exc
            if not isinstance(weight, int) or weight < 1:
                raise ConsensusError(f"weight for {address} must be a positive integer")
        if not 1 <= self.approval_threshold <= self.total_weight:
            raise ConsensusError("threshold must lie in [1, total weight]")
        if not self.proposer_roles:
            raise ConsensusError("at least one proposer role is required")
        if not set(self.proposer_roles) <= set(self.participants):
            raise ConsensusError("proposer roles must be participants")
        object.__setattr__(self, "proposer_roles", frozenset(self.proposer_roles))

    @property
    def total_weight(self) -> int:
        return sum(self.participants.values())

    def weight_of(self, address: str) -> int:
        return self.participants[address]

    def policy_bytes(self) -> bytes:
        parts = [self.approval_threshold.to_bytes(8, "big")]
        parts.append(len(self.participants).to_bytes(4, "big"))
        for address in sorted(self.participants):
            encoded = address.encode()
            parts.append(len(encoded).to_bytes(2, "big"))
            parts.append(encoded)
            parts.append(self.participants[address].to_bytes(8, "big"))
            parts.append(b"\x01" if address in self.proposer_roles else b"\x00")
        return b"".join(parts)

    def digest(self) -> bytes:
        return sha256(self.policy_bytes())

    def to_json(self) -> dict:
        return {
            "participants": dict(sorted(self.participants.items())),
            "approval_threshold": self.approval_threshold,
            "proposer_roles": sorted(self.proposer_roles),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GovernancePolicy":
        try:
            return cls(
                participants={a: int(w) for a, w in obj["participants"].items()},
                approval_threshold=int(obj["approval_threshold"]),
                proposer_roles=frozenset(obj["proposer_roles"]),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ConsensusError(f"malformed policy object: {exc}") from exc


@dataclass(frozen=True)
class Vote:
    voter: str
    version: int
    decision: str
    signature: Signature
    pubkey: PublicKey
    timestamp: str


@dataclass(frozen=True)
class Observation:
    author: str
    version: int
    text: str
    signature: Signature
    pubkey: PublicKey
    timestamp: str
    seq: int


@dataclass(frozen=True)
class TimelineEvent:
    seq: int
    kind: str
    actor: str
    payload_digest: bytes
    signature: Signature
    pubkey: PublicKey
    timestamp: str

    def digest(self) -> bytes:
        sig = self.signature.to_bytes(self.pubkey.curve)
        actor = self.actor.encode()
        ts = self.timestamp.encode()
        return sha256(
            bytes([EVENT_KINDS[self.kind]])
            + self.payload_digest
            + self.seq.to_bytes(8, "big")
            + len(actor).to_bytes(2, "big")
            + actor
            + len(ts).to_bytes(2, "big")
            + ts
            + len(sig).to_bytes(2, "big")
            + sig
            + self.pubkey.to_bytes()
        )


@dataclass(frozen=True)
class CertificateVote:
    voter: str
    decision: str
    signature: Signature
    pubkey: PublicKey


@dataclass(frozen=True)
class Certificate:
    """The immutable record of a finalized consensus."""

    contract_id: bytes
    period_id: str
    final_version: int
    report_digest: bytes
    payable_digest: bytes
    votes: tuple[CertificateVote, ...]
    timeline_digest: bytes
    anchor_ref: str

    def certificate_bytes(self) -> bytes:
        period = self.period_id.encode()
        parts = [
            self.contract_id,
            len(period).to_bytes(2, "big"),
            period,
            self.final_version.to_bytes(4, "big"),
            self.report_digest,
            self.payable_digest,
            len(self.votes).to_bytes(4, "big"),
        ]
        for vote in self.votes:
            voter = vote.voter.encode()
            sig = vote.signature.to_bytes(vote.pubkey.curve)
            pub = vote.pubkey.to_bytes()
            parts += [
                len(voter).to_bytes(2, "big"),
                voter,
                bytes([DECISION_BYTES[vote.decision]]),
                len(sig).to_bytes(2, "big"),
                sig,
                len(pub).to_bytes(2, "big"),
                pub,
            ]
        ref = self.anchor_ref.encode()
        parts += [self.timeline_digest, len(ref).to_bytes(2, "big"), ref]
        return b"".join(parts)

    def digest(self) -> bytes:
        return sha256(self.certificate_bytes())


@dataclass
class ProposalVersion:
    report: MeasurementReport
    digest: bytes
    anchor_ref: str


PENDING = "PendingReview"
REJECTED = "Rejected"
FINALIZED = "Finalized"


@dataclass
class Proposal:
    contract_id: bytes
    period_id: str
    state: str = PENDING
    current_version: int = 0
    versions: list[ProposalVersion] = field(default_factory=list)
    votes: dict[int, list[Vote]] = field(default_factory=dict)
    observations: dict[int, list[Observation]] = field(default_factory=dict)
    events: list[TimelineEvent] = field(default_factory=list)
    certificate: Certificate | None = None
    payable: PayableStatement | None = None

    def version_entry(self, version: int) -> ProposalVersion:
        return self.versions[version - 1]

    @property
    def next_seq(self) -> int:
        return len(self.events) + 1

    def approve_weight(self, policy: GovernancePolicy) -> int:
        return sum(
            policy.weight_of(v.voter)
            for v in self.votes.get(self.current_version, [])
            if v.decision == "approve"
        )

    def reject_weight(self, policy: GovernancePolicy) -> int:
        return sum(
            policy.weight_of(v.voter)
            for v in self.votes.get(self.current_version, [])
            if v.decision == "reject"
        )

    def timeline_digest(self) -> bytes:
        return sha256(b"".join(event.digest() for event in self.events))


@dataclass
class Contract:
    contract_id: bytes
    policy: GovernancePolicy
    program: Program
    events: list[TimelineEvent] = field(default_factory=list)
    proposals: dict[str, Proposal] = field(default_factory=dict)


def decision_outcome(policy: GovernancePolicy, approve_weight: int, reject_weight: int) -> str:
    """The configurable approval rule shared by engine and clients.

    'finalize' when approving weight reaches the threshold; 'reject' when
    the weight still able to approve cannot reach it; 'pending' otherwise.
    """
    if approve_weight >= policy.approval_threshold:
        return "finalize"
    if policy.total_weight - reject_weight < policy.approval_threshold:
        return "reject"
    return "pending"


def forecast_vote_outcome(
    policy: GovernancePolicy, proposal: Proposal, voter: str, decision: str
) -> str:
    """Outcome if ``voter`` cast ``decision`` now; clients use this to know
    whether a transition event signature must accompany the vote."""
    approve = proposal.approve_weight(policy)
    reject = proposal.reject_weight(policy)
    weight = policy.weight_of(voter)
    if decision == "approve":
        approve += weight
    else:
        reject += weight
    return decision_outcome(policy, approve, reject)


def proposal_key(contract_id: bytes, period_id: str) -> str:
    """Opaque proposal locator used by the HTTP facade."""
    return sha256(contract_id + period_id.encode()).hex()


# --- the state machine -------------------------------------------------------


class GovernanceBook:
    """All contracts plus the anchor chain; mutations are deterministic
    functions of their arguments, so an event-log replay reconstructs the
    identical book."""

    def __init__(self, curve: CurveParams, chain: Chain | None = None):
        self.curve = curve
        self.chain = chain if chain is not None else Chain()
        self.contracts: dict[str, Contract] = {}
        self.proposal_index: dict[str, tuple[str, str]] = {}

    # -- helpers ------------------------------------------------------------

    def contract(self, contract_id: bytes) -> Contract:
        contract = self.contracts.get(contract_id.hex())
        if contract is None:
            raise NotFoundError(f"unknown contract {contract_id.hex()[:16]}")
        return contract

    def proposal(self, contract_id: bytes, period_id: str) -> Proposal:
        contract = self.contract(contract_id)
        proposal = contract.proposals.get(period_id)
        if proposal is None:
            raise NotFoundError(f"no proposal for period {period_id!r}")
        return proposal

    def proposal_by_key(self, key: str) -> Proposal:
        entry = self.proposal_index.get(key)
        if entry is None:
            raise NotFoundError(f"unknown proposal {key[:16]}")
        cid_hex, period = entry
        return self.contracts[cid_hex].proposals[period]

    def _require_participant(self, policy: GovernancePolicy, address: str) -> None:
        if address not in policy.participants:
            raise AuthorizationError(f"{address} is not a policy participant")

    def _require_identity(self, pubkey: PublicKey, address: str) -> None:
        try:
            _, payload = decode_address(address)
        except Base58Error as exc:
            raise AuthenticationError(f"malformed address: {exc}") from exc
        if hash160(pubkey.to_bytes()) != payload:
            raise AuthenticationError(f"public key does not hash to {address}")

    def _verify(self, pubkey: PublicKey, digest: bytes, sig: Signature, what: str) -> None:
        if not verify(pubkey, digest, sig):
            raise AuthenticationError(f"invalid signature over {what}")

    def _signed_event(
        self,
        kind: str,
        seq: int,
        actor: str,
        payload_digest: bytes,
        sig: Signature,
        pubkey: PublicKey,
        ts: str,
    ) -> TimelineEvent:
        self._require_identity(pubkey, actor)
        self._verify(pubkey, event_signing_digest(kind, payload_digest, seq), sig, f"{kind} event")
        return TimelineEvent(
            seq=seq,
            kind=kind,
            actor=actor,
            payload_digest=payload_digest,
            signature=sig,
            pubkey=pubkey,
            timestamp=ts,
        )

    @staticmethod
    def _check_expected_seq(expected: int, actual: int) -> None:
        if expected != actual:
            raise ConflictError(f"timeline moved: expected seq {expected}, next is {actual}")

    # -- operations ------------------------------------------------------------

    def open_contract(
        self,
        policy: GovernancePolicy,
        program_source: str,
        opener: str,
        pubkey: PublicKey,
        event_sig: Signature,
        ts: str,
    ) -> bytes:
        """Register a contract; its id is the digest of policy plus program."""
        program = parse(program_source)  # ParseError propagates
        contract_id = sha256(policy.policy_bytes() + program_source.encode())
        if contract_id.hex() in self.contracts:
            raise ConflictError("contract already open (identical policy and program)")
        self._require_participant(policy, opener)
        event = self._signed_event("contract_opened", 1, opener, contract_id, event_sig, pubkey, ts)
        contract = Contract(contract_id=contract_id, policy=policy, program=program)
        contract.events.append(event)
        self.contracts[contract_id.hex()] = contract
        ref = f"contract/{contract_id.hex()}"
        self.chain.append_block(
            [
                AnchorEntry("policy", policy.digest(), f"{ref}/policy"),
                AnchorEntry("policy", program.digest, f"{ref}/program"),
                AnchorEntry("event", event.digest(), f"{ref}/events/1"),
            ],
            timestamp=ts,
        )
        return contract_id

    def propose(
        self,
        contract_id: bytes,
        report: MeasurementReport,
        proposer: str,
        pubkey: PublicKey,
        report_sig: Signature,
        event_sig: Signature,
        ts: str,
    ) -> Proposal:
        contract = self.contract(contract_id)
        policy = contract.policy
        self._require_participant(policy, proposer)
        if proposer not in policy.proposer_roles:
            raise AuthorizationError(f"{proposer} may not propose")
        if report.period_id in contract.proposals:
            raise ConflictError(f"period {report.period_id!r} already has a proposal")
        if report.contract_id != contract_id:
            raise ConsensusError("report is bound to a different contract")
        if report.version != 1:
            raise ConsensusError("a new proposal starts at version 1")
        if report.author != proposer:
            raise AuthenticationError("report author must be the proposer")
        digest = report_digest(report)
        self._require_identity(pubkey, proposer)
        self._verify(pubkey, digest, report_sig, "report digest")
        event = self._signed_event("proposed", 1, proposer, digest, event_sig, pubkey, ts)

        proposal = Proposal(contract_id=contract_id, period_id=report.period_id)
        ref = f"contract/{contract_id.hex()}/period/{report.period_id}/v1"
        proposal.versions.append(ProposalVersion(report=report, digest=digest, anchor_ref=ref))
        proposal.current_version = 1
        proposal.votes[1] = []
        proposal.observations[1] = []
        proposal.events.append(event)
        contract.proposals[report.period_id] = proposal
        self.proposal_index[proposal_key(contract_id, report.period_id)] = (
            contract_id.hex(),
            report.period_id,
        )
        self.chain.append_block(
            [
                AnchorEntry("report", digest, ref),
                AnchorEntry("event", event.digest(), f"{ref}/events/1"),
            ],
            timestamp=ts,
        )
        return proposal

    def observe(
        self,
        contract_id: bytes,
        period_id: str,
        text: str,
        author: str,
        pubkey: PublicKey,
        event_sig: Signature,
        expected_seq: int,
        ts: str,
    ) -> TimelineEvent:
        contract = self.contract(contract_id)
        proposal = self.proposal(contract_id, period_id)
        if proposal.state != PENDING:
            raise StateError(f"cannot observe a proposal in state {proposal.state}")
        self._require_participant(contract.policy, author)
        self._check_expected_seq(expected_seq, proposal.next_seq)
        digest = observation_digest(text)
        event = self._signed_event("observed", expected_seq, author, digest, event_sig, pubkey, ts)
        proposal.events.append(event)
        proposal.observations[proposal.current_version].append(
            Observation(
                author=author,
                version=proposal.current_version,
                text=text,
                signature=event_sig,
                pubkey=pubkey,
                timestamp=ts,
                seq=expected_seq,
            )
        )
        ref = f"contract/{contract_id.hex()}/period/{period_id}"
        self.chain.append_block(
            [AnchorEntry("event", event.digest(), f"{ref}/events/{expected_seq}")],
            timestamp=ts,
        )
        return event

    def cast_vote(
        self,
        contract_id: bytes,
        period_id: str,
        version: int,
        decision: str,
        voter: str,
        pubkey: PublicKey,
        vote_sig: Signature,
        event_sig: Signature,
        expected_seq: int,
        ts: str,
        transition_sig: Signature | None = None,
    ) -> Proposal:
        """Record a vote and apply the decision rule.

        A vote that finalizes or rejects the version must carry
        ``transition_sig`` over the follow-up timeline event; the whole
        action applies atomically or not at all.
        """
        if decision not in DECISION_BYTES:
            raise ConsensusError(f"unknown decision {decision!r}")
        contract = self.contract(contract_id)
        policy = contract.policy
        proposal = self.proposal(contract_id, period_id)
        if proposal.state != PENDING:
            raise StateError(f"cannot vote on a proposal in state {proposal.state}")
        self._require_participant(policy, voter)
        if version != proposal.current_version:
            raise ConflictError(
                f"stale version {version}; current is {proposal.current_version}"
            )
        if any(v.voter == voter for v in proposal.votes[version]):
            raise ConflictError(f"{voter} already voted on version {version}")
        self._check_expected_seq(expected_seq, proposal.next_seq)

        version_digest = proposal.version_entry(version).digest
        vb = vote_bytes(contract_id, period_id, version, decision, version_digest)
        vote_digest = sha256(vb)
        self._require_identity(pubkey, voter)
        self._verify(pubkey, vote_digest, vote_sig, "vote bytes")
        voted_event = self._signed_event(
            "voted", expected_seq, voter, vote_digest, event_sig, pubkey, ts
        )

        outcome = forecast_vote_outcome(policy, proposal, voter, decision)
        anchor_entries = []
        ref = f"contract/{contract_id.hex()}/period/{period_id}"
        transition_event = None
        statement = None
        certificate = None

        if outcome in ("finalize", "reject"):
            kind = "finalized" if outcome == "finalize" else "rejected"
            if transition_sig is None:
                raise AuthenticationError(
                    f"vote triggers {kind}; transition event signature required"
                )
            transition_event = self._signed_event(
                kind, expected_seq + 1, voter, version_digest, transition_sig, pubkey, ts
            )
        if outcome == "finalize":
            report = proposal.version_entry(version).report
            try:
                statement = evaluate(contract.program, report.metrics)
            except SlaError as exc:
                raise EvaluationError(f"payable evaluation failed: {exc}") from exc

        # all checks passed: apply atomically
        vote = Vote(
            voter=voter,
            version=version,
            decision=decision,
            signature=vote_sig,
            pubkey=pubkey,
            timestamp=ts,
        )
        proposal.votes[version].append(vote)
        proposal.events.append(voted_event)
        anchor_entries.append(
            AnchorEntry("event", voted_event.digest(), f"{ref}/events/{expected_seq}")
        )
        if transition_event is not None:
            proposal.events.append(transition_event)
            anchor_entries.append(
                AnchorEntry(
                    "event", transition_event.digest(), f"{ref}/events/{expected_seq + 1}"
                )
            )
        if outcome == "reject":
            proposal.state = REJECTED
        elif outcome == "finalize":
            proposal.state = FINALIZED
            proposal.payable = statement
            pay_digest = payable_digest(statement)
            certificate = Certificate(
                contract_id=contract_id,
                period_id=period_id,
                final_version=version,
                report_digest=version_digest,
                payable_digest=pay_digest,
                votes=tuple(
                    CertificateVote(v.voter, v.decision, v.signature, v.pubkey)
                    for v in proposal.votes[version]
                ),
                timeline_digest=proposal.timeline_digest(),
                anchor_ref=proposal.version_entry(version).anchor_ref,
            )
            proposal.certificate = certificate
            anchor_entries.append(
                AnchorEntry("certificate", certificate.digest(), f"{ref}/certificate")
            )
            anchor_entries.append(
                AnchorEntry("certificate", pay_digest, f"{ref}/payable")
            )
        self.chain.append_block(anchor_entries, timestamp=ts)
        return proposal

    def resubmit(
        self,
        contract_id: bytes,
        report: MeasurementReport,
        proposer: str,
        pubkey: PublicKey,
        report_sig: Signature,
        event_sig: Signature,
        expected_seq: int,
        ts: str,
    ) -> Proposal:
        contract = self.contract(contract_id)
        policy = contract.policy
        proposal = self.proposal(contract_id, report.period_id)
        if proposal.state != REJECTED:
            raise StateError(f"cannot resubmit a proposal in state {proposal.state}")
        self._require_participant(policy, proposer)
        if proposer not in policy.proposer_roles:
            raise AuthorizationError(f"{proposer} may not resubmit")
        next_version = proposal.current_version + 1
        if report.version != next_version:
            raise ConsensusError(f"resubmission must carry version {next_version}")
        if report.contract_id != contract_id:
            raise ConsensusError("report is bound to a different contract")
        if report.author != proposer:
            raise AuthenticationError("report author must be the proposer")
        self._check_expected_seq(expected_seq, proposal.next_seq)
        digest = report_digest(report)
        self._require_identity(pubkey, proposer)
        self._verify(pubkey, digest, report_sig, "report digest")
        event = self._signed_event(
            "resubmitted", expected_seq, proposer, digest, event_sig, pubkey, ts
        )

        ref = f"contract/{contract_id.hex()}/period/{report.period_id}/v{next_version}"
        proposal.versions.append(ProposalVersion(report=report, digest=digest, anchor_ref=ref))
        proposal.current_version = next_version
        proposal.votes[next_version] = []
        proposal.observations[next_version] = []
        proposal.state = PENDING
        proposal.events.append(event)
        self.chain.append_block(
            [
                AnchorEntry("report", digest, ref),
                AnchorEntry("event", event.digest(), f"{ref}/events/{expected_seq}"),
            ],
            timestamp=ts,
        )
        return proposal

    def timeline(self, contract_id: bytes, period_id: str) -> tuple[TimelineEvent, ...]:
        """Seq-ordered event history; empty when the period has none."""
        try:
            proposal = self.proposal(contract_id, period_id)
        except NotFoundError:
            return ()
        return tuple(proposal.events)

    def dry_run_payable(self, contract_id: bytes, period_id: str) -> PayableStatement:
        contract = self.contract(contract_id)
        proposal = self.proposal(contract_id, period_id)
        report = proposal.version_entry(proposal.current_version).report
        try:
            return evaluate(contract.program, report.metrics)
        except SlaError as exc:
            raise EvaluationError(f"payable evaluation failed: {exc}") from exc

    def state_digest(self) -> bytes:
        """Canonical digest of the whole book, for replay-equality checks."""
        parts = [self.chain.tip_digest, len(self.chain).to_bytes(8, "big")]
        for cid_hex in sorted(self.contracts):
            contract = self.contracts[cid_hex]
            parts.append(bytes.fromhex(cid_hex))
            parts.append(contract.policy.digest())
            parts.append(contract.program.digest)
            parts.append(len(contract.events).to_bytes(4, "big"))
            for event in contract.events:
                parts.append(event.digest())
            for period in sorted(contract.proposals):
                proposal = contract.proposals[period]
                parts.append(period.encode())
                parts.append(proposal.state.encode())
                parts.append(proposal.current_version.to_bytes(4, "big"))
                for entry in proposal.versions:
                    parts.append(entry.digest)
                for version in sorted(proposal.votes):
                    for vote in proposal.votes[version]:
                        parts.append(
                            vote_bytes(
                                proposal.contract_id,
                                period,
                                vote.version,
                                vote.decision,
                                proposal.version_entry(vote.version).digest,
                            )
                        )
                        parts.append(vote.signature.to_bytes(vote.pubkey.curve))
                for version in sorted(proposal.observations):
                    for obs in proposal.observations[version]:
                        parts.append(observation_digest(obs.text))
                parts.append(proposal.timeline_digest())
                if proposal.certificate is not None:
                    parts.append(proposal.certificate.digest())
        return sha256(b"".join(parts))


def verify_certificate(
    cert: Certificate, chain: Chain, policy: GovernancePolicy
) -> tuple[bool, str]:
    """Accept iff signatures verify, weight meets threshold, digests anchored."""
    if len(cert.report_digest) != DIGEST_LEN or len(cert.payable_digest) != DIGEST_LEN:
        return False, "malformed digest"
    approve_weight = 0
    seen = set()
    for vote in cert.votes:
        if vote.voter in seen:
            return False, f"duplicate vote by {vote.voter}"
        seen.add(vote.voter)
        if vote.voter not in policy.participants:
            return False, f"voter {vote.voter} not in policy"
        try:
            _, payload = decode_address(vote.voter)
        except Base58Error:
            return False, f"malformed voter address {vote.voter}"
        if hash160(vote.pubkey.to_bytes()) != payload:
            return False, f"public key mismatch for {vote.voter}"
        vb = vote_bytes(
            cert.contract_id,
            cert.period_id,
            cert.final_version,
            vote.decision,
            cert.report_digest,
        )
        if not verify(vote.pubkey, sha256(vb), vote.signature):
            return False, f"signature invalid for {vote.voter}"
        if vote.decision == "approve":
            approve_weight += policy.weight_of(vote.voter)
    if approve_weight < policy.approval_threshold:
        return False, "approval weight below threshold"
    if not find_entry(chain, cert.report_digest):
        return False, "report digest not anchored"
    if not find_entry(chain, cert.digest()):
        return False, "certificate digest not anchored"
    return True, "ok"
