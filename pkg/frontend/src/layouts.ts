/** The shared signing layouts: vote bytes, event digests, envelopes. */

import { bigintToBytes, concat, hexToBytes, intToBytesBE, utf8 } from "./bytes.js";
import { canonicalJson, JsonValue } from "./canonical.js";
import { sha256 } from "./sha256.js";

export const EVENT_KINDS: Record<string, number> = {
  contract_opened: 0x10,
  proposed: 0x11,
  observed: 0x12,
  voted: 0x13,
  rejected: 0x14,
  resubmitted: 0x15,
  finalized: 0x16,
};

export const DECISION_BYTES: Record<string, number> = { approve: 0x01, reject: 0x00 };

export function voteBytes(
  contractIdHex: string,
  periodId: string,
  version: number,
  decision: "approve" | "reject",
  reportDigestHex: string,
): Uint8Array {
  return concat(
    hexToBytes(contractIdHex),
    utf8(periodId),
    intToBytesBE(version, 4),
    new Uint8Array([DECISION_BYTES[decision]]),
    hexToBytes(reportDigestHex),
  );
}

export function eventSigningDigest(
  kind: string,
  payloadDigest: Uint8Array,
  seq: number,
): Uint8Array {
  const code = EVENT_KINDS[kind];
  if (code === undefined) throw new Error(`unknown event kind ${kind}`);
  return sha256(concat(new Uint8Array([code]), payloadDigest, bigintToBytes(BigInt(seq), 8)));
}

export function observationDigest(text: string): Uint8Array {
  return sha256(utf8(text));
}

export function payloadDigest(payload: JsonValue): Uint8Array {
  return sha256(canonicalJson(payload));
}

export function envelopeSigningDigest(digest: Uint8Array, nonce: number): Uint8Array {
  return sha256(concat(digest, bigintToBytes(BigInt(nonce), 8)));
}
