"""Canonical byte encoding of measurement reports and JSON payloads.

A report's canonical bytes are a fixed-order sequence of tagged,
length-prefixed fields with metrics sorted by name and decimals reduced to
canonical form, so any two economically equal reports hash identically
regardless of construction order or JSON formatting.  Digests are one-way:
there is deliberately no decoder, anchored digests verify without
disclosure.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal

from ags.crypto.base58 import Base58Error, decode_address
from ags.crypto.hashes import DIGEST_LEN, sha256
from ags.decimals import canon, dec, encode_decimal, format_decimal, scale_of

FIELD_CONTRACT = 0x01
FIELD_PERIOD = 0x02
FIELD_VERSION = 0x03
FIELD_AUTHOR = 0x04
FIELD_METRICS = 0x05
FIELD_NOTES = 0x06
FIELD_ATTACHMENTS = 0x07

_METRIC_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class CodecError(ValueError):
    """Report violates a structural invariant."""


@dataclass(frozen=True)
class MeasurementReport:
    """One contract period's operational metrics, versioned and attributed."""

    contract_id: bytes
    period_id: str
    metrics: dict[str, Decimal]
    author: str
    version: int = 1
    notes: str = ""
    attachment_digests: tuple[bytes, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if len(self.contract_id) != DIGEST_LEN:
            raise CodecError("contract_id must be a 32-byte digest")
        if not self.period_id:
            raise CodecError("period_id must be nonempty")
        if self.version < 1:
            raise CodecError("version must be >= 1")
        for name, value in self.metrics.items():
            if not _METRIC_NAME.match(name):
                raise CodecError(f"invalid metric name: {name!r}")
            if not isinstance(value, Decimal) or not value.is_finite():
                raise CodecError(f"metric {name} must be a finite decimal")
            if scale_of(canon(value)) > 9:
                raise CodecError(f"metric {name} exceeds scale 9")
        try:
            decode_address(self.author)
        except Base58Error as exc:
            raise CodecError(f"invalid author address: {exc}") from exc
        for digest in self.attachment_digests:
            if len(digest) != DIGEST_LEN:
                raise CodecError("attachment digests must be 32 bytes")
        object.__setattr__(self, "attachment_digests", tuple(self.attachment_digests))


def _frame(code: int, payload: bytes) -> bytes:
    return bytes([code]) + len(payload).to_bytes(4, "big") + payload


def canonical_bytes(report: MeasurementReport) -> bytes:
    """Deterministic layout; equal reports yield equal bytes."""
    metrics = b"".join(
        len(name.encode()).to_bytes(2, "big") + name.encode() + encode_decimal(value)
        for name, value in sorted(report.metrics.items())
    )
    return b"".join(
        (
            _frame(FIELD_CONTRACT, report.contract_id),
            _frame(FIELD_PERIOD, report.period_id.encode()),
            _frame(FIELD_VERSION, report.version.to_bytes(4, "big")),
            _frame(FIELD_AUTHOR, report.author.encode()),
            _frame(FIELD_METRICS, metrics),
            _frame(FIELD_NOTES, report.notes.encode()),
            _frame(FIELD_ATTACHMENTS, b"".join(report.attachment_digests)),
        )
    )


def report_digest(report: MeasurementReport) -> bytes:
    return sha256(canonical_bytes(report))


def report_to_json(report: MeasurementReport) -> dict:
    """Interchange form; canonical bytes are independent of its formatting."""
    return {
        "contract_id": report.contract_id.hex(),
        "period_id": report.period_id,
        "version": report.version,
        "author": report.author,
        "metrics": {name: format_decimal(value) for name, value in report.metrics.items()},
        "notes": report.notes,
        "attachment_digests": [d.hex() for d in report.attachment_digests],
    }


def report_from_json(obj: dict) -> MeasurementReport:
    try:
        return MeasurementReport(
            contract_id=bytes.fromhex(obj["contract_id"]),
            period_id=obj["period_id"],
            version=int(obj.get("version", 1)),
            author=obj["author"],
            metrics={name: dec(text) for name, text in obj["metrics"].items()},
            notes=obj.get("notes", ""),
            attachment_digests=tuple(
                bytes.fromhex(h) for h in obj.get("attachment_digests", [])
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CodecError):
            raise
        raise CodecError(f"malformed report object: {exc}") from exc


def canonical_json(value) -> bytes:
    """Whitespace- and order-independent JSON bytes for payload digests."""
    return json.dumps(
        value, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode()


def payload_digest(value) -> bytes:
    return sha256(canonical_json(value))
