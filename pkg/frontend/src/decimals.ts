/** Exact decimal strings: canonical form, wire encoding, comparison.
 *
 * Mirrors the backend's fixed-scale policy (at most nine fractional
 * digits, trailing fractional zeros stripped, -0 is 0) so locally
 * recomputed report digests match anchored ones.
 */

import { bigintToBytes, concat } from "./bytes.js";

export interface Dec {
  sign: 0 | 1;
  unscaled: bigint; // magnitude, nonnegative
  scale: number;
}

const NUMBER_RE = /^[+-]?[0-9]+(\.[0-9]{1,9})?$/;

export function parseDec(text: string): Dec {
  if (!NUMBER_RE.test(text)) throw new Error(`invalid decimal literal: ${text}`);
  let sign: 0 | 1 = 0;
  let body = text;
  if (body[0] === "+" || body[0] === "-") {
    if (body[0] === "-") sign = 1;
    body = body.slice(1);
  }
  const [intPart, fracPart = ""] = body.split(".");
  let digits = intPart + fracPart;
  let scale = fracPart.length;
  while (scale > 0 && digits.endsWith("0")) {
    digits = digits.slice(0, -1);
    scale--;
  }
  const unscaled = BigInt(digits || "0");
  if (unscaled === 0n) return { sign: 0, unscaled: 0n, scale: 0 };
  return { sign, unscaled, scale };
}

export function formatDec(value: Dec): string {
  const digits = value.unscaled.toString().padStart(value.scale + 1, "0");
  const cut = digits.length - value.scale;
  const text =
    value.scale === 0 ? digits : `${digits.slice(0, cut)}.${digits.slice(cut)}`;
  return (value.sign === 1 && value.unscaled !== 0n ? "-" : "") + text;
}

/** Wire form: sign byte, scale byte, 4-byte BE length, minimal magnitude. */
export function encodeDec(value: Dec): Uint8Array {
  let mag = new Uint8Array(0);
  if (value.unscaled > 0n) {
    let hex = value.unscaled.toString(16);
    if (hex.length % 2) hex = "0" + hex;
    mag = new Uint8Array(hex.length / 2);
    for (let i = 0; i < mag.length; i++) mag[i] = parseInt(hex.slice(2 * i, 2 * i + 2), 16);
  }
  return concat(
    new Uint8Array([value.sign, value.scale]),
    bigintToBytes(BigInt(mag.length), 4),
    mag,
  );
}

function signedAtScale(value: Dec, scale: number): bigint {
  const scaled = value.unscaled * 10n ** BigInt(scale - value.scale);
  return value.sign === 1 ? -scaled : scaled;
}

export function compareDec(a: Dec, b: Dec): number {
  const scale = Math.max(a.scale, b.scale);
  const av = signedAtScale(a, scale);
  const bv = signedAtScale(b, scale);
  return av === bv ? 0 : av < bv ? -1 : 1;
}

export function subtractDec(a: Dec, b: Dec): Dec {
  const scale = Math.max(a.scale, b.scale);
  const diff = signedAtScale(a, scale) - signedAtScale(b, scale);
  const sign: 0 | 1 = diff < 0n ? 1 : 0;
  let unscaled = diff < 0n ? -diff : diff;
  let s = scale;
  while (s > 0 && unscaled % 10n === 0n && unscaled !== 0n) {
    unscaled /= 10n;
    s--;
  }
  if (unscaled === 0n) return { sign: 0, unscaled: 0n, scale: 0 };
  return { sign, unscaled, scale: s };
}
