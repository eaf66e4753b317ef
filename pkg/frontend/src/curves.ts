/** Short-Weierstrass curve arithmetic over BigInt field elements. */

export interface CurveParams {
  name: string;
  p: bigint;
  a: bigint;
  b: bigint;
  gx: bigint;
  gy: bigint;
  n: bigint;
}

export const TOY: CurveParams = {
  name: "toy",
  p: 17n,
  a: 2n,
  b: 2n,
  gx: 5n,
  gy: 1n,
  n: 19n,
};

export const SECP256K1: CurveParams = {
  name: "secp256k1",
  p: 0xfffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2fn,
  a: 0n,
  b: 7n,
  gx: 0x79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798n,
  gy: 0x483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8n,
  n: 0xfffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141n,
};

export const CURVES: Record<string, CurveParams> = {
  toy: TOY,
  secp256k1: SECP256K1,
};

export function coordWidth(curve: CurveParams): number {
  return Math.ceil(curve.p.toString(2).length / 8);
}

export function scalarWidth(curve: CurveParams): number {
  return Math.ceil(curve.n.toString(2).length / 8);
}

/** Affine point; null is the point at infinity. */
export type Point = { x: bigint; y: bigint } | null;

function mod(v: bigint, m: bigint): bigint {
  const r = v % m;
  return r < 0n ? r + m : r;
}

export function modPow(base: bigint, exp: bigint, m: bigint): bigint {
  let result = 1n;
  let b = mod(base, m);
  let e = exp;
  while (e > 0n) {
    if (e & 1n) result = (result * b) % m;
    b = (b * b) % m;
    e >>= 1n;
  }
  return result;
}

export function modInv(value: bigint, m: bigint): bigint {
  return modPow(value, m - 2n, m); // m prime throughout
}

export function onCurve(point: Point, curve: CurveParams): boolean {
  if (point === null) return true;
  const { x, y } = point;
  if (x < 0n || x >= curve.p || y < 0n || y >= curve.p) return false;
  return mod(y * y - (x * x * x + curve.a * x + curve.b), curve.p) === 0n;
}

type Jac = [bigint, bigint, bigint];

function jacDouble([x1, y1, z1]: Jac, p: bigint, a: bigint): Jac {
  if (y1 === 0n || z1 === 0n) return [0n, 1n, 0n];
  const yy = mod(y1 * y1, p);
  const s = mod(4n * x1 * yy, p);
  let m: bigint;
  if (a !== 0n) {
    const z2 = mod(z1 * z1, p);
    m = mod(3n * x1 * x1 + a * z2 * z2, p);
  } else {
    m = mod(3n * x1 * x1, p);
  }
  const x3 = mod(m * m - 2n * s, p);
  const y3 = mod(m * (s - x3) - 8n * yy * yy, p);
  const z3 = mod(2n * y1 * z1, p);
  return [x3, y3, z3];
}

function jacAdd(q1: Jac, q2: Jac, p: bigint, a: bigint): Jac {
  const [x1, y1, z1] = q1;
  const [x2, y2, z2] = q2;
  if (z1 === 0n) return q2;
  if (z2 === 0n) return q1;
  const z1z1 = mod(z1 * z1, p);
  const z2z2 = mod(z2 * z2, p);
  const u1 = mod(x1 * z2z2, p);
  const u2 = mod(x2 * z1z1, p);
  const s1 = mod(y1 * z2 * z2z2, p);
  const s2 = mod(y2 * z1 * z1z1, p);
  const h = mod(u2 - u1, p);
  const r = mod(s2 - s1, p);
  if (h === 0n) {
    if (r === 0n) return jacDouble(q1, p, a);
    return [0n, 1n, 0n];
  }
  const hh = mod(h * h, p);
  const hhh = mod(h * hh, p);
  const v = mod(u1 * hh, p);
  const x3 = mod(r * r - hhh - 2n * v, p);
  const y3 = mod(r * (v - x3) - s1 * hhh, p);
  const z3 = mod(h * z1 * z2, p);
  return [x3, y3, z3];
}

function toAffine(q: Jac, p: bigint): Point {
  const [x, y, z] = q;
  if (z === 0n) return null;
  const zi = modInv(z, p);
  const zi2 = mod(zi * zi, p);
  return { x: mod(x * zi2, p), y: mod(y * zi2 * zi, p) };
}

export function scalarMul(k: bigint, point: Point, curve: CurveParams): Point {
  if (k < 0n) throw new Error("scalar must be nonnegative");
  if (k === 0n || point === null) return null;
  const { p, a } = curve;
  let acc: Jac = [0n, 1n, 0n];
  let base: Jac = [point.x, point.y, 1n];
  let e = k;
  while (e > 0n) {
    if (e & 1n) acc = jacAdd(acc, base, p, a);
    e >>= 1n;
    if (e > 0n) base = jacDouble(base, p, a);
  }
  return toAffine(acc, p);
}

export function pointAdd(p1: Point, p2: Point, curve: CurveParams): Point {
  if (p1 === null) return p2;
  if (p2 === null) return p1;
  const sum = jacAdd([p1.x, p1.y, 1n], [p2.x, p2.y, 1n], curve.p, curve.a);
  return toAffine(sum, curve.p);
}

import { bigintToBytes, bytesToBigint, concat } from "./bytes.js";

export function serializePoint(point: Point, curve: CurveParams): Uint8Array {
  if (point === null) throw new Error("cannot serialize infinity");
  const w = coordWidth(curve);
  return concat(new Uint8Array([0x04]), bigintToBytes(point.x, w), bigintToBytes(point.y, w));
}

export function parsePoint(data: Uint8Array, curve: CurveParams): Point {
  const w = coordWidth(curve);
  if (data.length !== 1 + 2 * w || data[0] !== 0x04) {
    throw new Error("malformed uncompressed point");
  }
  const point = {
    x: bytesToBigint(data.slice(1, 1 + w)),
    y: bytesToBigint(data.slice(1 + w)),
  };
  if (!onCurve(point, curve)) throw new Error("point not on curve");
  return point;
}
