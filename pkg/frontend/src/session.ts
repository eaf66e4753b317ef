/** Browser-local signing session.
 *
 * The private scalar lives only in local storage (injectable for tests)
 * and never appears in any network payload; requests carry the derived
 * public key, the address, and signatures.
 */

import { deriveAddress } from "./base58.js";
import { CURVES, CurveParams, Point, serializePoint } from "./curves.js";
import { bytesToHex } from "./bytes.js";
import { derivePublic, sign, Signature, signatureToBytes } from "./ecdsa.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const KEY_SLOT = "ags.session.key";
const WATCH_SLOT = "ags.session.contracts";

export class SessionKey {
  readonly curve: CurveParams;
  readonly pub: Point;
  readonly address: string;

  constructor(
    private readonly d: bigint,
    curveName: string,
  ) {
    const curve = CURVES[curveName];
    if (!curve) throw new Error(`unknown curve ${curveName}`);
    this.curve = curve;
    this.pub = derivePublic(d, curve);
    this.address = deriveAddress(this.pub, curve);
  }

  pubkeyHex(): string {
    return bytesToHex(serializePoint(this.pub, this.curve));
  }

  signDigest(z: Uint8Array): Signature {
    return sign(this.d, z, this.curve);
  }

  signDigestHex(z: Uint8Array): string {
    return bytesToHex(signatureToBytes(this.signDigest(z), this.curve));
  }
}

export class Session {
  constructor(private storage: StorageLike) {}

  save(dHex: string, curveName: string): SessionKey {
    const key = new SessionKey(BigInt("0x" + dHex), curveName);
    this.storage.setItem(KEY_SLOT, JSON.stringify({ d: dHex, curve: curveName }));
    return key;
  }

  load(): SessionKey | null {
    const raw = this.storage.getItem(KEY_SLOT);
    if (raw === null) return null;
    const { d, curve } = JSON.parse(raw) as { d: string; curve: string };
    return new SessionKey(BigInt("0x" + d), curve);
  }

  clear(): void {
    this.storage.removeItem(KEY_SLOT);
  }

  watchedContracts(): string[] {
    const raw = this.storage.getItem(WATCH_SLOT);
    return raw === null ? [] : (JSON.parse(raw) as string[]);
  }

  watchContract(contractId: string): void {
    const current = this.watchedContracts();
    if (!current.includes(contractId)) {
      this.storage.setItem(WATCH_SLOT, JSON.stringify([...current, contractId]));
    }
  }
}

/** In-memory stand-in used by tests and non-browser drivers. */
export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
  removeItem(key: string): void {
    this.data.delete(key);
  }
}
