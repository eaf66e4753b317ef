/** Base58Check and address derivation (hash160 of the public key). */

import { concat } from "./bytes.js";
import { Point, CurveParams, serializePoint } from "./curves.js";
import { hash160 } from "./ripemd160.js";
import { doubleSha256 } from "./sha256.js";

const ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
const INDEX = new Map([...ALPHABET].map((c, i) => [c, BigInt(i)]));

export function b58encode(data: Uint8Array): string {
  let zeros = 0;
  while (zeros < data.length && data[zeros] === 0) zeros++;
  let acc = 0n;
  for (const byte of data) acc = (acc << 8n) | BigInt(byte);
  let out = "";
  while (acc > 0n) {
    out = ALPHABET[Number(acc % 58n)] + out;
    acc /= 58n;
  }
  return "1".repeat(zeros) + out;
}

export function b58decode(text: string): Uint8Array {
  let zeros = 0;
  while (zeros < text.length && text[zeros] === "1") zeros++;
  let acc = 0n;
  for (const ch of text) {
    const digit = INDEX.get(ch);
    if (digit === undefined) throw new Error(`invalid base58 character ${ch}`);
    acc = acc * 58n + digit;
  }
  const body: number[] = [];
  while (acc > 0n) {
    body.unshift(Number(acc & 0xffn));
    acc >>= 8n;
  }
  return new Uint8Array([...new Array(zeros).fill(0), ...body]);
}

export function base58checkEncode(data: Uint8Array): string {
  return b58encode(concat(data, doubleSha256(data).slice(0, 4)));
}

export function base58checkDecode(text: string): Uint8Array {
  const raw = b58decode(text);
  if (raw.length < 5) throw new Error("base58check payload too short");
  const data = raw.slice(0, -4);
  const check = raw.slice(-4);
  const expected = doubleSha256(data).slice(0, 4);
  for (let i = 0; i < 4; i++) {
    if (check[i] !== expected[i]) throw new Error("base58check checksum mismatch");
  }
  return data;
}

export function deriveAddress(pub: Point, curve: CurveParams, version = 0): string {
  const payload = hash160(serializePoint(pub, curve));
  return base58checkEncode(concat(new Uint8Array([version]), payload));
}
