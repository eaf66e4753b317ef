"""Regenerate the shared fixtures under fixtures/.

Deterministic: same inputs, same bytes.  The signature and codec vectors
are the conformance contract for any other client implementation (the web
console reproduces them bit for bit); the overbilling CSV is a synthetic
monthly reduction series whose summary is computed here and written
alongside, never asserted from memory.
"""

from __future__ import annotations

import json
import random
import sys
from decimal import Decimal
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ags.analysis import summarize_overbilling
from ags.codec import MeasurementReport, canonical_bytes, report_digest, report_to_json
from ags.consensus import event_signing_digest, vote_bytes
from ags.crypto import CURVES, PrivateKey, sha256, sign
from ags.decimals import format_decimal
from ags.signing import Actor

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

UPTIME_PENALTY_PROGRAM = """\
param base = 1000
param C = 100
metric U
payable: if U >= 99.9 then base else base - C * (99.9 - U)
"""


def sig_entry(actor: Actor, z: bytes, kind: str, detail: dict) -> dict:
    signature = sign(actor.priv, z)
    return {
        "curve": actor.curve.name,
        "d": f"{actor.priv.d:064x}",
        "address": actor.address,
        "pubkey": actor.pubkey.to_bytes().hex(),
        "kind": kind,
        "z": z.hex(),
        "r": f"{signature.r:x}",
        "s": f"{signature.s:x}",
        "sig": signature.to_bytes(actor.curve).hex(),
        **detail,
    }


def make_sigvectors() -> dict:
    vectors = []
    contract_id = sha256(b"conformance contract")
    rep_digest = sha256(b"conformance report v1")
    for curve_name, scalars in [("toy", (3, 7, 11)), ("secp256k1", (1, 0xC0FFEE, 2**200 + 12345))]:
        curve = CURVES[curve_name]
        for d in scalars:
            actor = Actor(PrivateKey(d, curve))
            # plain digest signatures
            for message in (b"", b"abc", b"cross-component conformance"):
                z = sha256(message)
                vectors.append(
                    sig_entry(actor, z, "digest", {"message": message.decode()})
                )
            # vote signatures over the exact shared layout
            for version, decision in [(1, "approve"), (2, "reject")]:
                vb = vote_bytes(contract_id, "2023-04", version, decision, rep_digest)
                vectors.append(
                    sig_entry(
                        actor,
                        sha256(vb),
                        "vote",
                        {
                            "contract_id": contract_id.hex(),
                            "period_id": "2023-04",
                            "version": version,
                            "decision": decision,
                            "report_digest": rep_digest.hex(),
                            "vote_bytes": vb.hex(),
                        },
                    )
                )
            # timeline event signatures
            for kind, seq in [("voted", 3), ("finalized", 4)]:
                z = event_signing_digest(kind, rep_digest, seq)
                vectors.append(
                    sig_entry(
                        actor,
                        z,
                        "event",
                        {"event_kind": kind, "payload_digest": rep_digest.hex(), "seq": seq},
                    )
                )
    return {"description": "deterministic signature conformance vectors", "vectors": vectors}


def make_codecvectors() -> dict:
    author = Actor(PrivateKey(3, CURVES["toy"])).address
    contract_id = sha256(b"conformance contract")
    reports = [
        MeasurementReport(
            contract_id=contract_id,
            period_id="2023-04",
            metrics={},
            author=author,
        ),
        MeasurementReport(
            contract_id=contract_id,
            period_id="2023-04",
            metrics={"U": Decimal("99.4")},
            author=author,
        ),
        MeasurementReport(
            contract_id=contract_id,
            period_id="2023-05",
            metrics={"U": Decimal("99.90"), "tickets": Decimal("17"), "delta": Decimal("-2.5")},
            author=author,
            version=3,
            notes="two escalations",
            attachment_digests=(sha256(b"scan-a"), sha256(b"scan-b")),
        ),
    ]
    return {
        "description": "canonical report encoding vectors",
        "vectors": [
            {
                "report": report_to_json(report),
                "canonical_bytes": canonical_bytes(report).hex(),
                "digest": report_digest(report).hex(),
            }
            for report in reports
        ],
    }


def make_overbilling_csv() -> tuple[str, dict]:
    rng = random.Random(46_2021)
    rows = ["period,label,value"]
    values = []
    for label, months, base in [("steel", 26, 2.4), ("drilling", 8, 1.8)]:
        year, month = 2021, 1
        for _ in range(months):
            # reductions hover around each firm's level with monthly noise
            value = max(0.05, rng.gauss(base, 0.55))
            text = f"{value:.2f}"
            rows.append(f"{year}-{month:02d},{label},{text}")
            values.append(Decimal(text))
            month += 1
            if month > 12:
                month, year = 1, year + 1
    summary = summarize_overbilling(values)
    meta = {
        "mean": format_decimal(summary.mean),
        "count": summary.count,
        "min": format_decimal(summary.minimum),
        "max": format_decimal(summary.maximum),
    }
    return "\n".join(rows) + "\n", meta


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    (FIXTURES / "sigvectors.json").write_text(
        json.dumps(make_sigvectors(), indent=2, sort_keys=True) + "\n"
    )
    (FIXTURES / "codecvectors.json").write_text(
        json.dumps(make_codecvectors(), indent=2, sort_keys=True) + "\n"
    )
    csv_text, meta = make_overbilling_csv()
    (FIXTURES / "overbilling_monthly.csv").write_text(csv_text)
    (FIXTURES / "overbilling_monthly.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n"
    )
    (FIXTURES / "uptime_penalty.sla").write_text(UPTIME_PENALTY_PROGRAM)
    print(f"wrote fixtures to {FIXTURES}")
    print(f"overbilling summary: {meta}")


if __name__ == "__main__":
    main()
