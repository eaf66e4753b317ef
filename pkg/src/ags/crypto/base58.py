"""Base58Check encoding and participant address derivation.

An address is the Base58Check text of ``version || RIPEMD-160(SHA-256(Q))``
where Q is the uncompressed public-key serialization.  The 4-byte checksum
is the leading bytes of a double SHA-256.
"""

from __future__ import annotations

from ags.crypto.ecdsa import PublicKey
from ags.crypto.hashes import double_sha256, hash160

ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_INDEX = {c: i for i, c in enumerate(ALPHABET)}

CHECKSUM_LEN = 4
PAYLOAD_LEN = 20


class Base58Error(ValueError):
    """Invalid character or failed checksum in Base58Check text."""


def b58encode(data: bytes) -> str:
    """Plain base58; leading zero bytes become leading '1' characters."""
    zeros = len(data) - len(data.lstrip(b"\x00"))
    acc = int.from_bytes(data, "big")
    out = []
    while acc:
        acc, rem = divmod(acc, 58)
        out.append(ALPHABET[rem])
    return "1" * zeros + "".join(reversed(out))


def b58decode(text: str) -> bytes:
    zeros = len(text) - len(text.lstrip("1"))
    acc = 0
    for ch in text:
        try:
            acc = acc * 58 + _INDEX[ch]
        except KeyError:
            raise Base58Error(f"invalid base58 character: {ch!r}") from None
    body = acc.to_bytes((acc.bit_length() + 7) // 8, "big")
    return b"\x00" * zeros + body


def base58check_encode(data: bytes) -> str:
    """Append the 4-byte double-SHA-256 checksum and encode."""
    return b58encode(data + double_sha256(data)[:CHECKSUM_LEN])


def base58check_decode(text: str) -> bytes:
    raw = b58decode(text)
    if len(raw) < CHECKSUM_LEN + 1:
        raise Base58Error("base58check payload too short")
    data, check = raw[:-CHECKSUM_LEN], raw[-CHECKSUM_LEN:]
    if double_sha256(data)[:CHECKSUM_LEN] != check:
        raise Base58Error("base58check checksum mismatch")
    return data


def derive_address(pub: PublicKey, version: int = 0) -> str:
    """Hash the public key (SHA-256 then RIPEMD-160) and Base58Check it."""
    if not 0 <= version <= 0xFF:
        raise ValueError("version byte out of range")
    payload = hash160(pub.to_bytes())
    return base58check_encode(bytes([version]) + payload)


def decode_address(text: str) -> tuple[int, bytes]:
    """Recover (version, 20-byte key hash); raises on any corruption."""
    raw = base58check_decode(text)
    if len(raw) != 1 + PAYLOAD_LEN:
        raise Base58Error("address payload must be 20 bytes")
    return raw[0], raw[1:]


def address_matches(pub: PublicKey, address: str) -> bool:
    """True iff ``address`` is the Base58Check hash of ``pub``."""
    try:
        _, payload = decode_address(address)
    except Base58Error:
        return False
    return payload == hash160(pub.to_bytes())
