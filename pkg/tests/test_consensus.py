"""Consensus state machine: transitions, signatures, certificates."""

from decimal import Decimal

import pytest

from ags.consensus import (
    FINALIZED,
    PENDING,
    REJECTED,
    AuthenticationError,
    AuthorizationError,
    ConflictError,
    ConsensusError,
    EvaluationError,
    GovernancePolicy,
    NotFoundError,
    StateError,
    forecast_vote_outcome,
    verify_certificate,
)
from ags.crypto import TOY, PrivateKey, Signature, sha256
from ags.ledger import find_entry, verify_chain
from ags.signing import Actor
from ags.slalang import ParseError

from .conftest import UPTIME_PENALTY_PROGRAM, make_report, ts


def open_contract(book, policy, actors, program=UPTIME_PENALTY_PROGRAM, opener="alice"):
    actor = actors[opener]
    contract_id = sha256(policy.policy_bytes() + program.encode())
    event_sig = actor.sign_event("contract_opened", contract_id, 1)
    return book.open_contract(policy, program, actor.address, actor.pubkey, event_sig, ts(0))


def propose(book, cid, actors, proposer="alice", period="2023-04", uptime="99.4", t=1):
    actor = actors[proposer]
    report = make_report(cid, actor.address, period=period, uptime=uptime)
    from ags.codec import report_digest

    digest = report_digest(report)
    return book.propose(
        cid,
        report,
        actor.address,
        actor.pubkey,
        actor.sign_report(report),
        actor.sign_event("proposed", digest, 1),
        ts(t),
    )


def cast(book, cid, actors, voter, decision, period="2023-04", version=None, t=2, policy=None):
    actor = actors[voter]
    proposal = book.proposal(cid, period)
    version = proposal.current_version if version is None else version
    try:
        digest = proposal.version_entry(version).digest
    except IndexError:
        digest = proposal.version_entry(proposal.current_version).digest
    seq = proposal.next_seq
    vote_sig = actor.sign_vote(cid, period, version, decision, digest)
    from ags.consensus import sha256 as _sha, vote_bytes

    event_sig = actor.sign_event("voted", _sha(vote_bytes(cid, period, version, decision, digest)), seq)
    transition_sig = None
    if policy is not None and version == proposal.current_version:
        outcome = forecast_vote_outcome(policy, proposal, actor.address, decision)
        if outcome == "finalize":
            transition_sig = actor.sign_event("finalized", digest, seq + 1)
        elif outcome == "reject":
            transition_sig = actor.sign_event("rejected", digest, seq + 1)
    return book.cast_vote(
        cid,
        period,
        version,
        decision,
        actor.address,
        actor.pubkey,
        vote_sig,
        event_sig,
        seq,
        ts(t),
        transition_sig=transition_sig,
    )


def observe(book, cid, actors, who, text, period="2023-04", t=5):
    actor = actors[who]
    proposal = book.proposal(cid, period)
    seq = proposal.next_seq
    return book.observe(
        cid,
        period,
        text,
        actor.address,
        actor.pubkey,
        actor.sign_observation_event(text, seq),
        seq,
        ts(t),
    )


def resubmit(book, cid, actors, proposer="alice", period="2023-04", uptime="99.8", t=9):
    actor = actors[proposer]
    proposal = book.proposal(cid, period)
    version = proposal.current_version + 1
    report = make_report(cid, actor.address, period=period, version=version, uptime=uptime)
    from ags.codec import report_digest

    digest = report_digest(report)
    seq = proposal.next_seq
    return book.resubmit(
        cid,
        report,
        actor.address,
        actor.pubkey,
        actor.sign_report(report),
        actor.sign_event("resubmitted", digest, seq),
        seq,
        ts(t),
    )


# --- open_contract ---------------------------------------------------------


def test_open_contract_is_content_addressed(book, policy, actors):
    cid = open_contract(book, policy, actors)
    assert cid == sha256(policy.policy_bytes() + UPTIME_PENALTY_PROGRAM.encode())
    with pytest.raises(ConflictError):
        open_contract(book, policy, actors)
    assert verify_chain(book.chain) is None
    assert find_entry(book.chain, policy.digest())


def test_open_contract_rejects_bad_program(book, policy, actors):
    with pytest.raises(ParseError):
        open_contract(book, policy, actors, program="payable: nope")


def test_open_contract_requires_participant(book, policy, actors):
    outsider = Actor(PrivateKey(15, TOY))
    cid = sha256(policy.policy_bytes() + UPTIME_PENALTY_PROGRAM.encode())
    with pytest.raises(AuthorizationError):
        book.open_contract(
            policy,
            UPTIME_PENALTY_PROGRAM,
            outsider.address,
            outsider.pubkey,
            outsider.sign_event("contract_opened", cid, 1),
            ts(0),
        )


def test_policy_invariants(actors):
    a, b = actors["alice"].address, actors["bob"].address
    with pytest.raises(ConsensusError):
        GovernancePolicy({a: 1}, 1, frozenset({a}))
    with pytest.raises(ConsensusError):
        GovernancePolicy({a: 1, b: 1}, 3, frozenset({a}))
    with pytest.raises(ConsensusError):
        GovernancePolicy({a: 1, b: 1}, 0, frozenset({a}))
    with pytest.raises(ConsensusError):
        GovernancePolicy({a: 1, b: -2}, 1, frozenset({a}))
    with pytest.raises(ConsensusError):
        GovernancePolicy({a: 1, b: 1}, 2, frozenset({"1BadAddr"}))
    policy = GovernancePolicy({a: 1, b: 1}, 2, frozenset({a}))
    assert policy.total_weight == 2
    assert GovernancePolicy.from_json(policy.to_json()) == policy


# --- propose -----------------------------------------------------------------


def test_propose_happy_path(book, policy, actors):
    cid = open_contract(book, policy, actors)
    proposal = propose(book, cid, actors)
    assert proposal.state == PENDING
    assert proposal.current_version == 1
    assert [e.kind for e in proposal.events] == ["proposed"]
    assert find_entry(book.chain, proposal.versions[0].digest)


def test_propose_duplicate_period_conflicts(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    with pytest.raises(ConflictError):
        propose(book, cid, actors, t=3)


def test_propose_requires_proposer_role(book, policy, actors):
    cid = open_contract(book, policy, actors)
    with pytest.raises(AuthorizationError):
        propose(book, cid, actors, proposer="bob")


def test_propose_rejects_non_participant_signature(book, policy, actors):
    cid = open_contract(book, policy, actors)
    alice = actors["alice"]
    outsider = Actor(PrivateKey(14, TOY))
    report = make_report(cid, alice.address)
    from ags.codec import report_digest

    digest = report_digest(report)
    # outsider signs but claims alice's address
    with pytest.raises(AuthenticationError):
        book.propose(
            cid,
            report,
            alice.address,
            outsider.pubkey,
            outsider.sign_report(report),
            outsider.sign_event("proposed", digest, 1),
            ts(1),
        )


def test_propose_rejects_tampered_signature(book, policy, actors):
    cid = open_contract(book, policy, actors)
    alice = actors["alice"]
    report = make_report(cid, alice.address)
    from ags.codec import report_digest

    digest = report_digest(report)
    good = alice.sign_report(report)
    bad = Signature(good.r, good.s % TOY.n + 1 if good.s % TOY.n + 1 < TOY.n else 1)
    try:
        book.propose(
            cid, report, alice.address, alice.pubkey, bad,
            alice.sign_event("proposed", digest, 1), ts(1),
        )
    except AuthenticationError:
        pass
    else:
        # bad may accidentally equal good on the tiny curve; ensure not
        assert bad == good


def test_propose_unknown_contract(book, policy, actors):
    with pytest.raises(NotFoundError):
        propose(book, sha256(b"nothing"), actors)


# --- observe -----------------------------------------------------------------


def test_observe_appends_without_state_change(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    event = observe(book, cid, actors, "bob", "metric dip on the 14th")
    proposal = book.proposal(cid, "2023-04")
    assert proposal.state == PENDING
    assert event.seq == 2
    assert proposal.observations[1][0].text == "metric dip on the 14th"


def test_observe_order_matches_submission(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    observe(book, cid, actors, "bob", "first", t=3)
    observe(book, cid, actors, "carol", "second", t=4)
    observe(book, cid, actors, "alice", "third", t=5)
    events = book.timeline(cid, "2023-04")
    assert [e.seq for e in events] == [1, 2, 3, 4]
    texts = [o.text for o in book.proposal(cid, "2023-04").observations[1]]
    assert texts == ["first", "second", "third"]


def test_observe_wrong_state_and_non_participant(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    assert book.proposal(cid, "2023-04").state == FINALIZED
    with pytest.raises(StateError):
        observe(book, cid, actors, "carol", "too late")


# --- cast_vote ----------------------------------------------------------------


def test_weighted_finalization(book, policy, actors):
    # weights {alice:2, bob:1, carol:1}, threshold 3
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    proposal = cast(book, cid, actors, "alice", "approve", policy=policy)
    assert proposal.state == PENDING  # 2 < 3
    proposal = cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    assert proposal.state == FINALIZED  # 3 >= 3
    assert proposal.certificate is not None
    assert [e.kind for e in proposal.events] == ["proposed", "voted", "voted", "finalized"]


def test_unreachable_approval_rejects(book, actors):
    a, b = actors["alice"].address, actors["bob"].address
    policy = GovernancePolicy({a: 1, b: 1}, 2, frozenset({a}))
    book_local = type(book)(TOY)
    cid = open_contract(book_local, policy, actors)
    propose(book_local, cid, actors)
    proposal = cast(book_local, cid, actors, "alice", "reject", policy=policy)
    assert proposal.state == REJECTED  # remaining approvable weight 1 < 2
    assert proposal.events[-1].kind == "rejected"


def test_double_vote_conflicts(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "bob", "approve", policy=policy)
    with pytest.raises(ConflictError):
        cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    with pytest.raises(ConflictError):
        cast(book, cid, actors, "bob", "reject", policy=policy, t=3)


def test_stale_version_vote_conflicts(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    # alice's weight-2 reject leaves approvable weight 2 < threshold 3
    proposal = cast(book, cid, actors, "alice", "reject", policy=policy)
    assert proposal.state == REJECTED
    resubmit(book, cid, actors)
    with pytest.raises(ConflictError):
        cast(book, cid, actors, "carol", "approve", version=1, policy=policy, t=10)


def test_vote_requires_transition_signature_when_deciding(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    # bob's approve reaches the threshold but omits the transition signature
    with pytest.raises(AuthenticationError):
        cast(book, cid, actors, "bob", "approve", policy=None, t=3)
    # nothing changed: bob can still vote correctly afterwards
    proposal = cast(book, cid, actors, "bob", "approve", policy=policy, t=4)
    assert proposal.state == FINALIZED


def test_non_participant_cannot_vote(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    outsider_actors = dict(actors)
    outsider_actors["mallory"] = Actor(PrivateKey(13, TOY))
    with pytest.raises(AuthorizationError):
        cast(book, cid, outsider_actors, "mallory", "approve", policy=None)


def test_evaluation_failure_aborts_vote_atomically(book, policy, actors):
    program = "metric U\nmetric absent\npayable: U + absent"
    cid = open_contract(book, policy, actors, program=program)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    proposal = book.proposal(cid, "2023-04")
    chain_len = len(book.chain)
    with pytest.raises(EvaluationError):
        cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    assert proposal.state == PENDING
    assert len(proposal.votes[1]) == 1  # bob's vote not recorded
    assert len(book.chain) == chain_len  # nothing anchored
    # a reject path still works, allowing a fixed resubmission
    cast(book, cid, actors, "bob", "reject", policy=policy, t=4)
    proposal = cast(book, cid, actors, "carol", "reject", policy=policy, t=5)
    assert proposal.state == REJECTED


# --- resubmit -----------------------------------------------------------------


def test_reject_then_resubmit_cycle(book, actors):
    a, b = actors["alice"].address, actors["bob"].address
    policy = GovernancePolicy({a: 1, b: 1}, 2, frozenset({a}))
    book_local = type(book)(TOY)
    cid = open_contract(book_local, policy, actors)
    propose(book_local, cid, actors)
    cast(book_local, cid, actors, "bob", "reject", policy=policy)
    proposal = resubmit(book_local, cid, actors)
    assert proposal.state == PENDING
    assert proposal.current_version == 2
    assert proposal.votes[2] == []
    assert proposal.votes[1] != []  # history preserved


def test_resubmit_requires_rejected_state(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    with pytest.raises(StateError):
        resubmit(book, cid, actors)


def test_five_reject_resubmit_cycles(book, actors):
    a, b = actors["alice"].address, actors["bob"].address
    policy = GovernancePolicy({a: 1, b: 1}, 2, frozenset({a}))
    book_local = type(book)(TOY)
    cid = open_contract(book_local, policy, actors)
    propose(book_local, cid, actors)
    t = 2
    for cycle in range(5):
        cast(book_local, cid, actors, "bob", "reject", policy=policy, t=t)
        t += 1
        resubmit(book_local, cid, actors, uptime=f"99.{cycle + 1}", t=t)
        t += 1
    proposal = book_local.proposal(cid, "2023-04")
    assert proposal.current_version == 6
    # propose + 5x(reject-vote + rejected + resubmitted) events
    assert len(proposal.events) == 1 + 5 * 3
    cast(book_local, cid, actors, "bob", "approve", policy=policy, t=t)
    proposal = cast(book_local, cid, actors, "alice", "approve", policy=policy, t=t + 1)
    assert proposal.state == FINALIZED
    assert proposal.certificate.final_version == 6


# --- finalize & certificate -----------------------------------------------------


def test_certificate_embeds_payable_950(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors, uptime="99.4")
    cast(book, cid, actors, "alice", "approve", policy=policy)
    proposal = cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    assert proposal.payable.total == Decimal(950)
    cert = proposal.certificate
    assert cert.report_digest == proposal.versions[0].digest
    assert find_entry(book.chain, cert.report_digest)
    assert find_entry(book.chain, cert.digest())
    assert find_entry(book.chain, cert.payable_digest)
    ok, reason = verify_certificate(cert, book.chain, policy)
    assert ok, reason


def test_certificate_rejects_tampered_vote_signature(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    cert = cast(book, cid, actors, "bob", "approve", policy=policy, t=3).certificate
    from dataclasses import replace

    from ags.consensus import vote_bytes
    from ags.crypto import verify as ec_verify

    target = cert.votes[0]
    vb = vote_bytes(cid, "2023-04", 1, target.decision, cert.report_digest)
    # pick a mutation that genuinely fails verification; on the tiny toy
    # group a blind flip can verify by accident (~1/19)
    bad_sig = next(
        Signature(target.signature.r, s)
        for s in range(1, TOY.n)
        if s != target.signature.s
        and not ec_verify(target.pubkey, sha256(vb), Signature(target.signature.r, s))
    )
    tampered = replace(cert, votes=(replace(target, signature=bad_sig),) + cert.votes[1:])
    ok, reason = verify_certificate(tampered, book.chain, policy)
    assert not ok and "signature" in reason


def test_certificate_rejects_unanchored_report(book, policy, actors):
    # votes bind the report digest, so an unanchored digest must come with
    # genuine signatures over it: forge a coherent but never-anchored cert
    from ags.consensus import Certificate, CertificateVote

    cid = open_contract(book, policy, actors)
    alice, bob = actors["alice"], actors["bob"]
    ghost_digest = sha256(b"never anchored")
    votes = tuple(
        CertificateVote(
            actor.address,
            "approve",
            actor.sign_vote(cid, "2099-01", 1, "approve", ghost_digest),
            actor.pubkey,
        )
        for actor in (alice, bob)
    )
    ghost = Certificate(
        contract_id=cid,
        period_id="2099-01",
        final_version=1,
        report_digest=ghost_digest,
        payable_digest=sha256(b"ghost payable"),
        votes=votes,
        timeline_digest=sha256(b"ghost timeline"),
        anchor_ref="nowhere",
    )
    ok, reason = verify_certificate(ghost, book.chain, policy)
    assert not ok and "anchor" in reason


def test_certificate_rejects_below_threshold(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    cert = cast(book, cid, actors, "bob", "approve", policy=policy, t=3).certificate
    from dataclasses import replace

    thin = replace(cert, votes=cert.votes[1:])  # drop alice's weight-2 vote
    ok, reason = verify_certificate(thin, book.chain, policy)
    assert not ok and "threshold" in reason


# --- timeline ------------------------------------------------------------------


def test_timeline_counts(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    cast(book, cid, actors, "alice", "approve", policy=policy)
    cast(book, cid, actors, "bob", "approve", policy=policy, t=3)
    events = book.timeline(cid, "2023-04")
    assert len(events) == 4  # proposed + 2 votes + finalized
    assert [e.seq for e in events] == [1, 2, 3, 4]
    assert book.timeline(cid, "1999-01") == ()


def test_every_event_signed_by_a_participant(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    observe(book, cid, actors, "carol", "looks fine")
    cast(book, cid, actors, "alice", "approve", policy=policy, t=6)
    cast(book, cid, actors, "bob", "approve", policy=policy, t=7)
    from ags.consensus import event_signing_digest
    from ags.crypto import verify

    for event in book.timeline(cid, "2023-04"):
        assert event.actor in policy.participants
        digest = event_signing_digest(event.kind, event.payload_digest, event.seq)
        assert verify(event.pubkey, digest, event.signature)


def test_chain_stays_valid_through_full_flow(book, policy, actors):
    cid = open_contract(book, policy, actors)
    propose(book, cid, actors)
    observe(book, cid, actors, "bob", "check appendix")
    cast(book, cid, actors, "alice", "approve", policy=policy, t=6)
    cast(book, cid, actors, "carol", "approve", policy=policy, t=7)
    assert verify_chain(book.chain) is None
    assert book.proposal(cid, "2023-04").state == FINALIZED


def test_state_digest_is_deterministic(book, policy, actors):
    def run():
        local = type(book)(TOY)
        cid = open_contract(local, policy, actors)
        propose(local, cid, actors)
        cast(local, cid, actors, "alice", "approve", policy=policy)
        cast(local, cid, actors, "bob", "approve", policy=policy, t=3)
        return local.state_digest()

    assert run() == run()
