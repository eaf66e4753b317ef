/** Deterministic ECDSA, byte-compatible with the backend.
 *
 * The nonce is an iterated keyed hash over (scalar, digest, counter), so
 * the same key and message always produce the same (r, s) here and on the
 * server side; the shared fixture vectors pin this equivalence.
 */

import { bigintToBytes, bytesToBigint, concat, utf8 } from "./bytes.js";
import {
  CurveParams,
  Point,
  modInv,
  pointAdd,
  scalarMul,
  scalarWidth,
} from "./curves.js";
import { sha256 } from "./sha256.js";

const NONCE_TAG = utf8("ags/nonce/v1");
const MAX_NONCE_ATTEMPTS = 128;

export interface Signature {
  r: bigint;
  s: bigint;
}

export function derivePublic(d: bigint, curve: CurveParams): Point {
  if (d < 1n || d > curve.n - 1n) throw new Error("private scalar out of range");
  return scalarMul(d, { x: curve.gx, y: curve.gy }, curve);
}

function deriveNonce(d: bigint, z: Uint8Array, counter: number, curve: CurveParams): bigint {
  const seed = sha256(concat(NONCE_TAG, utf8(curve.name), bigintToBytes(d, 32), z));
  const raw = sha256(concat(seed, bigintToBytes(BigInt(counter), 4)));
  return (bytesToBigint(raw) % (curve.n - 1n)) + 1n;
}

function mod(v: bigint, m: bigint): bigint {
  const r = v % m;
  return r < 0n ? r + m : r;
}

export function sign(d: bigint, z: Uint8Array, curve: CurveParams): Signature {
  if (z.length !== 32) throw new Error("digest must be 32 bytes");
  const n = curve.n;
  const zi = mod(bytesToBigint(z), n);
  const g: Point = { x: curve.gx, y: curve.gy };
  for (let counter = 0; counter < MAX_NONCE_ATTEMPTS; counter++) {
    const k = deriveNonce(d, z, counter, curve);
    const rPoint = scalarMul(k, g, curve);
    if (rPoint === null) continue;
    const r = mod(rPoint.x, n);
    if (r === 0n) continue;
    const s = mod(modInv(k, n) * (zi + r * d), n);
    if (s === 0n) continue;
    return { r, s };
  }
  throw new Error("nonce derivation failed");
}

export function verify(pub: Point, z: Uint8Array, sig: Signature, curve: CurveParams): boolean {
  if (pub === null || z.length !== 32) return false;
  const n = curve.n;
  if (sig.r < 1n || sig.r > n - 1n || sig.s < 1n || sig.s > n - 1n) return false;
  const zi = mod(bytesToBigint(z), n);
  const w = modInv(sig.s, n);
  const u1 = mod(zi * w, n);
  const u2 = mod(sig.r * w, n);
  const point = pointAdd(
    scalarMul(u1, { x: curve.gx, y: curve.gy }, curve),
    scalarMul(u2, pub, curve),
    curve,
  );
  if (point === null) return false;
  return mod(point.x, n) === sig.r;
}

export function signatureToBytes(sig: Signature, curve: CurveParams): Uint8Array {
  const w = scalarWidth(curve);
  return concat(bigintToBytes(sig.r, w), bigintToBytes(sig.s, w));
}

export function signatureFromBytes(data: Uint8Array, curve: CurveParams): Signature {
  const w = scalarWidth(curve);
  if (data.length !== 2 * w) throw new Error(`signature must be ${2 * w} bytes`);
  return { r: bytesToBigint(data.slice(0, w)), s: bytesToBigint(data.slice(w)) };
}
