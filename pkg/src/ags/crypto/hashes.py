"""Hash frontend: picks the compiled kernels, falls back to pure Python.

Set ``AGS_PURE_HASH=1`` to force the pure backend (used by the benchmark
and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from ags.crypto import _purehash

if os.environ.get("AGS_PURE_HASH") == "1":
    _impl = _purehash
    BACKEND = "pure"
else:
    try:
        from ags.crypto import _corehash as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _purehash
        BACKEND = "pure"

DIGEST_LEN = 32


def sha256(data: bytes) -> bytes:
    """SHA-256 digest, 32 bytes."""
    return _impl.sha256_bytes(data)


def ripemd160(data: bytes) -> bytes:
    """RIPEMD-160 digest, 20 bytes."""
    return _impl.ripemd160_bytes(data)


def double_sha256(data: bytes) -> bytes:
    return _impl.sha256_bytes(_impl.sha256_bytes(data))


def hash160(data: bytes) -> bytes:
    """The address pipeline hash: RIPEMD-160 over SHA-256."""
    return _impl.ripemd160_bytes(_impl.sha256_bytes(data))


def as_digest(value: bytes) -> bytes:
    """Validate a 32-byte digest value."""
    if not isinstance(value, (bytes, bytearray)) or len(value) != DIGEST_LEN:
        raise ValueError(f"digest must be exactly {DIGEST_LEN} bytes")
    return bytes(value)
