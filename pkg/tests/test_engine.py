"""Event-sourced node: full flows, replay determinism, crash recovery."""

import pytest

from ags.client import RemoteActionError
from ags.consensus import proposal_key
from ags.crypto import TOY
from ags.engine import ActionRequest, GovernanceNode
from ags.ledger import verify_chain_file
from ags.store import StoreError, read_store

from .runs import (
    UPTIME_PENALTY_PROGRAM,
    clients,
    full_cycle_run,
    make_actors,
    many_event_run,
    report_for,
    standard_policy,
)


def test_full_cycle_produces_certificate(tmp_path):
    node, cid, actors = full_cycle_run(tmp_path / "store")
    cert = node.certificate_view(cid, "2023-04")
    assert cert["verified"] is True
    assert cert["final_version"] == 2
    assert cert["payable"]["total"] == "950"
    # the payable digest is anchored
    anchors = node.anchors_view(cert["payable_digest"])
    assert anchors and anchors[0]["kind"] == "certificate"


def test_chain_file_verifies(tmp_path):
    node, _, _ = full_cycle_run(tmp_path / "store")
    assert verify_chain_file(node.chain_path) is None
    assert node.verify_own_chain() is None


def test_replay_reproduces_state(tmp_path):
    node, _, _ = full_cycle_run(tmp_path / "store")
    replayed = GovernanceNode(tmp_path / "store", TOY)
    assert replayed.state_digest() == node.state_digest()
    assert replayed.healthz() == node.healthz()
    # replay is idempotent
    again = GovernanceNode(tmp_path / "store", TOY)
    assert again.state_digest() == node.state_digest()


def test_replay_of_longer_run(tmp_path):
    node, _ = many_event_run(tmp_path / "store", 60)
    assert node.store.height == 60
    replayed = GovernanceNode(tmp_path / "store", TOY)
    assert replayed.state_digest() == node.state_digest()


def test_nonce_replay_rejected(tmp_path):
    from ags.codec import payload_digest
    from ags.consensus import ConflictError
    from ags.store import envelope_signing_digest

    actors = make_actors()
    node = GovernanceNode(tmp_path / "store", TOY)
    by = clients(node, actors)
    by["alice"].open_contract(standard_policy(actors), UPTIME_PENALTY_PROGRAM)
    # correctly signed request reusing alice's already-consumed nonce 1
    alice = actors["alice"]
    payload = {"policy": standard_policy(actors).to_json(), "program": "payable: 1"}
    digest = payload_digest(payload)
    sig = alice.sign_digest(envelope_signing_digest(digest, 1))
    stale = ActionRequest(
        actor=alice.address,
        action="contract.open",
        payload=payload,
        nonce=1,
        pubkey_hex=alice.pubkey.to_bytes().hex(),
        sig_hex=sig.to_bytes(alice.curve).hex(),
    )
    with pytest.raises(ConflictError) as err:
        node.submit(stale)
    assert "nonce" in str(err.value)


def test_rejected_action_leaves_no_trace(tmp_path):
    actors = make_actors()
    node = GovernanceNode(tmp_path / "store", TOY)
    by = clients(node, actors)
    cid = by["alice"].open_contract(standard_policy(actors), UPTIME_PENALTY_PROGRAM)
    before = node.state_digest()
    height = node.store.height
    with pytest.raises(RemoteActionError) as err:
        by["bob"].propose(report_for(cid, actors["bob"].address, "2023-05", 1, "99"))
    assert err.value.status == 403  # bob is not a proposer
    assert node.state_digest() == before
    assert node.store.height == height


def test_crash_truncation_at_every_append_boundary(tmp_path):
    node, _ = many_event_run(tmp_path / "store", 30)
    data = node.store_path.read_bytes()
    boundaries = [0]
    for i, byte in enumerate(data):
        if byte == 0x0A:
            boundaries.append(i + 1)
    digests = []
    probe_dir = tmp_path / "probe"
    probe_dir.mkdir()
    probe_store = probe_dir / "events.jsonl"
    for boundary in boundaries:
        probe_store.write_bytes(data[:boundary])
        (probe_dir / "chain.jsonl").unlink(missing_ok=True)
        replayed = GovernanceNode(probe_dir, TOY)
        assert replayed.store.height == boundaries.index(boundary)
        digests.append(replayed.state_digest())
    assert digests[-1] == node.state_digest()
    assert len(set(digests)) == len(digests)  # every prefix is a distinct state


def test_crash_mid_record_recovers_previous_state(tmp_path):
    node, _ = many_event_run(tmp_path / "store", 10)
    data = node.store_path.read_bytes()
    boundaries = [0]
    for i, byte in enumerate(data):
        if byte == 0x0A:
            boundaries.append(i + 1)
    probe_dir = tmp_path / "probe"
    probe_dir.mkdir()
    for k in (1, 4, 9):
        start, end = boundaries[k], boundaries[k + 1]
        cut = (start + end) // 2
        (probe_dir / "events.jsonl").write_bytes(data[:cut])
        (probe_dir / "chain.jsonl").unlink(missing_ok=True)
        replayed = GovernanceNode(probe_dir, TOY)
        assert replayed.store.height == k  # torn tail dropped


def test_strict_read_detects_mid_file_flip(tmp_path):
    node, _ = many_event_run(tmp_path / "store", 12)
    data = bytearray(node.store_path.read_bytes())
    boundaries = [0]
    for i, byte in enumerate(data):
        if byte == 0x0A:
            boundaries.append(i + 1)
    offset = boundaries[6] + 25  # inside record 7
    data[offset] ^= 0x04
    node.store_path.write_bytes(bytes(data))
    with pytest.raises(StoreError) as err:
        read_store(node.store_path, TOY, recover=True)
    assert err.value.seq == 7


def test_views(tmp_path):
    node, cid, actors = full_cycle_run(tmp_path / "store")
    contract = node.contract_view(cid)
    assert contract["policy"]["approval_threshold"] == 3
    assert "2023-04" in contract["proposals"]
    key = contract["proposals"]["2023-04"]["proposal_id"]
    assert key == proposal_key(bytes.fromhex(cid), "2023-04")
    proposal = node.proposal_view(key)
    assert proposal["state"] == "Finalized"
    assert proposal["current_version"] == 2
    assert len(proposal["versions"]) == 2
    timeline = node.timeline_view(key)
    kinds = [e["kind"] for e in timeline]
    assert kinds == [
        "proposed",
        "observed",
        "voted",
        "rejected",
        "resubmitted",
        "voted",
        "voted",
        "finalized",
    ]
    payable = node.payable_view(key)
    assert payable["statement"]["total"] == "950"
    assert any(t["label"] == "U >= 99.9" and t["value"] is False for t in payable["trace"])


def test_healthz_counts(tmp_path):
    node, cid, actors = full_cycle_run(tmp_path / "store")
    health = node.healthz()
    assert health["store_height"] == 7
    assert health["chain_height"] == 7  # one block per action
    assert health["nonces"][actors["alice"].address] >= 1
