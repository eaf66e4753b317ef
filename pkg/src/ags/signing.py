"""Client-side signing of consensus actions.

The engine never holds private keys: callers sign the fixed byte layouts
here and submit signatures.  A vote that will finalize or reject the
current version also needs a signature over the follow-up timeline event,
which :func:`forecast_vote_outcome` predicts with the engine's own rule.
"""

from __future__ import annotations

from ags.codec import MeasurementReport, report_digest
from ags.crypto.base58 import derive_address
from ags.crypto.ecdsa import PrivateKey, PublicKey, Signature, derive_public, sign
from ags.crypto.hashes import sha256
from ags.consensus import event_signing_digest, observation_digest, vote_bytes


class Actor:
    """A key pair plus its derived address; signs consensus actions."""

    def __init__(self, priv: PrivateKey, version_byte: int = 0):
        self.priv = priv
        self.pubkey: PublicKey = derive_public(priv)
        self.address: str = derive_address(self.pubkey, version_byte)

    @property
    def curve(self):
        return self.priv.curve

    def sign_digest(self, digest: bytes) -> Signature:
        return sign(self.priv, digest)

    def sign_report(self, report: MeasurementReport) -> Signature:
        return sign(self.priv, report_digest(report))

    def sign_event(self, kind: str, payload_digest: bytes, seq: int) -> Signature:
        return sign(self.priv, event_signing_digest(kind, payload_digest, seq))

    def sign_vote(
        self,
        contract_id: bytes,
        period_id: str,
        version: int,
        decision: str,
        rep_digest: bytes,
    ) -> Signature:
        vb = vote_bytes(contract_id, period_id, version, decision, rep_digest)
        return sign(self.priv, sha256(vb))

    def sign_observation_event(self, text: str, seq: int) -> Signature:
        return self.sign_event("observed", observation_digest(text), seq)
