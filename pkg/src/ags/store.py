"""Append-only signed event store (JSON Lines).

Every mutating action is persisted as a signed envelope; state is always a
deterministic replay of this file.  Records form their own hash chain
(each commits to the previous record's digest), so any byte of tampering
is detectable at the exact record, and a torn final line from a crash is
distinguishable from corruption: it is dropped in recovery mode, never
silently accepted.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from ags.codec import canonical_json, payload_digest as compute_payload_digest
from ags.crypto.curves import CurveParams, parse_point
from ags.crypto.ecdsa import PublicKey, Signature, verify
from ags.crypto.hashes import DIGEST_LEN, sha256

GENESIS_RECORD = b"\x00" * DIGEST_LEN


class StoreError(ValueError):
    """Corrupt store record; ``seq`` is the first bad sequence number."""

    def __init__(self, seq: int, reason: str):
        super().__init__(f"store record {seq}: {reason}")
        self.seq = seq


def envelope_signing_digest(payload_dig: bytes, nonce: int) -> bytes:
    """Envelope signatures cover payload digest || nonce."""
    return sha256(payload_dig + nonce.to_bytes(8, "big"))


@dataclass(frozen=True)
class SignedEnvelope:
    seq: int
    ts: str
    actor: str
    action: str
    payload: dict
    payload_digest: bytes
    nonce: int
    pubkey: PublicKey
    sig: Signature
    record_digest: bytes

    def body_json(self) -> dict:
        """All fields except the record-chain digest, in wire form."""
        return {
            "seq": self.seq,
            "ts": self.ts,
            "actor": self.actor,
            "action": self.action,
            "payload": self.payload,
            "payload_digest": self.payload_digest.hex(),
            "nonce": self.nonce,
            "pubkey": self.pubkey.to_bytes().hex(),
            "sig": self.sig.to_bytes(self.pubkey.curve).hex(),
        }

    def to_line(self) -> bytes:
        record = self.body_json()
        record["record_digest"] = self.record_digest.hex()
        return canonical_json(record) + b"\n"


def compute_record_digest(prev_digest: bytes, body: dict) -> bytes:
    return sha256(prev_digest + canonical_json(body))


def seal_envelope(
    seq: int,
    ts: str,
    actor: str,
    action: str,
    payload: dict,
    nonce: int,
    pubkey: PublicKey,
    sig: Signature,
    prev_record_digest: bytes,
) -> SignedEnvelope:
    """Assemble a full record with its chain digest (no verification here)."""
    envelope = SignedEnvelope(
        seq=seq,
        ts=ts,
        actor=actor,
        action=action,
        payload=payload,
        payload_digest=compute_payload_digest(payload),
        nonce=nonce,
        pubkey=pubkey,
        sig=sig,
        record_digest=b"",
    )
    digest = compute_record_digest(prev_record_digest, envelope.body_json())
    return replace(envelope, record_digest=digest)


def _parse_record(obj: dict, curve: CurveParams, seq: int) -> SignedEnvelope:
    try:
        pubkey = PublicKey(parse_point(bytes.fromhex(obj["pubkey"]), curve), curve)
        return SignedEnvelope(
            seq=int(obj["seq"]),
            ts=obj["ts"],
            actor=obj["actor"],
            action=obj["action"],
            payload=obj["payload"],
            payload_digest=bytes.fromhex(obj["payload_digest"]),
            nonce=int(obj["nonce"]),
            pubkey=pubkey,
            sig=Signature.from_bytes(bytes.fromhex(obj["sig"]), curve),
            record_digest=bytes.fromhex(obj["record_digest"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StoreError(seq, f"malformed record: {exc}") from exc


def verify_envelope(
    envelope: SignedEnvelope, prev_record_digest: bytes, last_nonce: int
) -> None:
    """All integrity checks for one record, raising StoreError at its seq."""
    seq = envelope.seq
    if envelope.record_digest != compute_record_digest(
        prev_record_digest, envelope.body_json()
    ):
        raise StoreError(seq, "record chain digest mismatch")
    if envelope.payload_digest != compute_payload_digest(envelope.payload):
        raise StoreError(seq, "payload digest mismatch")
    if envelope.nonce <= last_nonce:
        raise StoreError(seq, f"nonce {envelope.nonce} not above {last_nonce}")
    if not verify(
        envelope.pubkey,
        envelope_signing_digest(envelope.payload_digest, envelope.nonce),
        envelope.sig,
    ):
        raise StoreError(seq, "envelope signature invalid")


def read_store(
    path: str | Path, curve: CurveParams, recover: bool = False
) -> list[SignedEnvelope]:
    """Parse and fully verify a store file.

    With ``recover`` a torn final line (crash artifact: no trailing
    newline) is dropped; in strict mode it is an error at its seq.
    Complete lines must always verify.
    """
    path = Path(path)
    if not path.exists():
        return []
    data = path.read_bytes()
    if not data:
        return []
    complete = data.count(b"\n")
    torn = not data.endswith(b"\n")
    envelopes: list[SignedEnvelope] = []
    prev_digest = GENESIS_RECORD
    nonces: dict[str, int] = {}
    for index, line in enumerate(data.split(b"\n")[:complete]):
        seq = index + 1
        try:
            obj = json.loads(line)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise StoreError(seq, f"unparseable line: {exc}") from exc
        envelope = _parse_record(obj, curve, seq)
        if envelope.seq != seq:
            raise StoreError(seq, f"sequence hole: record claims {envelope.seq}")
        # bit-exact replay contract: a line that parses but is not the
        # canonical serialization (case-flipped hex, say) is corruption
        try:
            canonical = envelope.to_line()
        except (ValueError, TypeError) as exc:
            raise StoreError(seq, f"unserializable record: {exc}") from exc
        if canonical != line + b"\n":
            raise StoreError(seq, "non-canonical record bytes")
        verify_envelope(envelope, prev_digest, nonces.get(envelope.actor, 0))
        nonces[envelope.actor] = envelope.nonce
        envelopes.append(envelope)
        prev_digest = envelope.record_digest
    if torn and not recover:
        raise StoreError(complete + 1, "torn final line")
    return envelopes


class EventStore:
    """Single-writer appender over the JSONL file."""

    def __init__(self, path: str | Path, curve: CurveParams, recover: bool = True):
        self.path = Path(path)
        self.curve = curve
        self.records = read_store(self.path, curve, recover=recover)

    @property
    def height(self) -> int:
        return len(self.records)

    @property
    def tip_digest(self) -> bytes:
        return self.records[-1].record_digest if self.records else GENESIS_RECORD

    def last_nonce(self, actor: str) -> int:
        latest = 0
        for record in self.records:
            if record.actor == actor and record.nonce > latest:
                latest = record.nonce
        return latest

    def append(self, envelope: SignedEnvelope) -> None:
        with open(self.path, "ab") as fh:
            fh.write(envelope.to_line())
            fh.flush()
            os.fsync(fh.fileno())
        self.records.append(envelope)
