/** Canonical JSON bytes: sorted keys, no whitespace, raw unicode.
 *
 * Matches the backend's payload-digest serialization; only strings,
 * integers, booleans, null, arrays, and objects may appear in payloads
 * (decimal amounts always travel as strings).
 */

import { utf8 } from "./bytes.js";

export type JsonValue =
  | string
  | number
  | boolean
  | null
  | JsonValue[]
  | { [key: string]: JsonValue };

function serialize(value: JsonValue): string {
  if (value === null || typeof value === "boolean" || typeof value === "string") {
    return JSON.stringify(value);
  }
  if (typeof value === "number") {
    if (!Number.isInteger(value)) {
      throw new Error(`non-integer number in canonical payload: ${value}`);
    }
    return String(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(serialize).join(",") + "]";
  }
  const keys = Object.keys(value).sort();
  const fields = keys.map((k) => JSON.stringify(k) + ":" + serialize(value[k]));
  return "{" + fields.join(",") + "}";
}

export function canonicalJson(value: JsonValue): Uint8Array {
  return utf8(serialize(value));
}
