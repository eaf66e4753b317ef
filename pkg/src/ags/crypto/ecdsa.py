"""ECDSA key pairs, deterministic signing, and verification.

Signing is a pure function of (private key, message digest): the nonce is
derived from an iterated keyed hash over (d, z, counter) instead of an
RNG, so identical inputs always yield byte-identical signatures and test
vectors hold across components.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass
from pathlib import Path

from ags.crypto.curves import (
    CurveParams,
    ECPoint,
    _add,
    _jac_add,
    _jac_double,
    get_curve,
    scalar_mul,
    serialize_point,
)
from ags.crypto.hashes import as_digest, sha256

_NONCE_TAG = b"ags/nonce/v1"
_MAX_NONCE_ATTEMPTS = 128


class CryptoError(ValueError):
    """Structurally invalid key, signature encoding, or signing failure."""


@dataclass(frozen=True)
class PrivateKey:
    d: int
    curve: CurveParams

    def __post_init__(self) -> None:
        if not 1 <= self.d <= self.curve.n - 1:
            raise CryptoError("private scalar out of range")

    def __repr__(self) -> str:  # keep the scalar out of logs
        return f"PrivateKey(curve={self.curve.name})"


@dataclass(frozen=True)
class PublicKey:
    point: ECPoint
    curve: CurveParams

    def __post_init__(self) -> None:
        if self.point.is_infinity:
            raise CryptoError("public key cannot be the point at infinity")
        self.curve.require(self.point)

    def to_bytes(self) -> bytes:
        return serialize_point(self.point, self.curve)


@dataclass(frozen=True)
class Signature:
    r: int
    s: int

    def to_bytes(self, curve: CurveParams) -> bytes:
        """Wire form r || s, fixed-width big-endian."""
        w = curve.scalar_width
        if not (1 <= self.r <= curve.n - 1 and 1 <= self.s <= curve.n - 1):
            raise CryptoError("signature component out of range")
        return self.r.to_bytes(w, "big") + self.s.to_bytes(w, "big")

    @classmethod
    def from_bytes(cls, data: bytes, curve: CurveParams) -> "Signature":
        w = curve.scalar_width
        if len(data) != 2 * w:
            raise CryptoError(f"signature must be {2 * w} bytes")
        return cls(int.from_bytes(data[:w], "big"), int.from_bytes(data[w:], "big"))


def generate_private(curve: CurveParams) -> PrivateKey:
    return PrivateKey(1 + secrets.randbelow(curve.n - 1), curve)


def derive_public(priv: PrivateKey) -> PublicKey:
    return PublicKey(scalar_mul(priv.d, priv.curve.G, priv.curve), priv.curve)


def _derive_nonce(priv: PrivateKey, z: bytes, counter: int) -> int:
    seed = sha256(_NONCE_TAG + priv.curve.name.encode() + priv.d.to_bytes(32, "big") + z)
    raw = sha256(seed + counter.to_bytes(4, "big"))
    return int.from_bytes(raw, "big") % (priv.curve.n - 1) + 1


def sign(priv: PrivateKey, z: bytes) -> Signature:
    """Sign a 32-byte digest: r = (kG).x mod n, s = k^-1 (z + r d) mod n."""
    z = as_digest(z)
    curve = priv.curve
    n = curve.n
    zi = int.from_bytes(z, "big") % n
    for counter in range(_MAX_NONCE_ATTEMPTS):
        k = _derive_nonce(priv, z, counter)
        r = scalar_mul(k, curve.G, curve).x % n
        if r == 0:
            continue
        s = pow(k, n - 2, n) * (zi + r * priv.d) % n
        if s == 0:
            continue
        return Signature(r, s)
    raise CryptoError("nonce derivation failed to produce a valid signature")


def verify(pub: PublicKey, z: bytes, sig: Signature) -> bool:
    """True iff ``sig`` was produced over ``z`` by the key behind ``pub``.

    Malformed r or s (outside [1, n-1]) rejects rather than raising.
    """
    z = as_digest(z)
    curve = pub.curve
    n = curve.n
    if not (1 <= sig.r <= n - 1 and 1 <= sig.s <= n - 1):
        return False
    zi = int.from_bytes(z, "big") % n
    w = pow(sig.s, n - 2, n)
    u1 = zi * w % n
    u2 = sig.r * w % n
    point = _shamir_mul(u1, curve.G, u2, pub.point, curve)
    if point.is_infinity:
        return False
    return point.x % n == sig.r


def _shamir_mul(
    u1: int, p1: ECPoint, u2: int, p2: ECPoint, curve: CurveParams
) -> ECPoint:
    """Interleaved double-and-add for u1*P1 + u2*P2."""
    p, a = curve.p, curve.a
    sum12 = _add(p1, p2, curve)
    table = {
        1: (p1.x, p1.y, 1) if not p1.is_infinity else None,
        2: (p2.x, p2.y, 1) if not p2.is_infinity else None,
        3: (sum12.x, sum12.y, 1) if not sum12.is_infinity else None,
    }
    rx, ry, rz = 0, 1, 0
    for i in range(max(u1.bit_length(), u2.bit_length()) - 1, -1, -1):
        if rz:
            rx, ry, rz = _jac_double(rx, ry, rz, p, a)
        idx = ((u1 >> i) & 1) | (((u2 >> i) & 1) << 1)
        if idx:
            entry = table[idx]
            if entry is not None:
                rx, ry, rz = _jac_add(rx, ry, rz, *entry, p, a)
    if not rz:
        return ECPoint(None, None)
    zinv = pow(rz, p - 2, p)
    zinv2 = zinv * zinv % p
    return ECPoint(rx * zinv2 % p, ry * zinv2 * zinv % p)


def save_key(path: str | Path, priv: PrivateKey) -> None:
    """Key file: the scalar as 64 hex chars plus the curve name."""
    payload = {"curve": priv.curve.name, "d": f"{priv.d:064x}"}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_key(path: str | Path) -> PrivateKey:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        curve = get_curve(payload["curve"])
        d_hex = payload["d"]
        if len(d_hex) != 64:
            raise CryptoError("key file scalar must be 64 hex chars")
        return PrivateKey(int(d_hex, 16), curve)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, CryptoError):
            raise
        raise CryptoError(f"unreadable key file {path}: {exc}") from exc
