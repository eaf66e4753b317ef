"""Key pairs, signatures, hashes, addresses, and security arithmetic."""

from ags.crypto.base58 import (
    Base58Error,
    address_matches,
    b58decode,
    b58encode,
    base58check_decode,
    base58check_encode,
    decode_address,
    derive_address,
)
from ags.crypto.combinatorics import (
    collision_probability,
    key_space_size,
    smallest_majority_collision_count,
)
from ags.crypto.curves import (
    CURVES,
    INFINITY,
    SECP256K1,
    TOY,
    CurveError,
    CurveParams,
    ECPoint,
    ec_add,
    enumerate_points,
    get_curve,
    parse_point,
    scalar_mul,
    serialize_point,
)
from ags.crypto.ecdsa import (
    CryptoError,
    PrivateKey,
    PublicKey,
    Signature,
    derive_public,
    generate_private,
    load_key,
    save_key,
    sign,
    verify,
)
from ags.crypto.hashes import (
    BACKEND,
    DIGEST_LEN,
    as_digest,
    double_sha256,
    hash160,
    ripemd160,
    sha256,
)

__all__ = [
    "BACKEND",
    "Base58Error",
    "CURVES",
    "CryptoError",
    "CurveError",
    "CurveParams",
    "DIGEST_LEN",
    "ECPoint",
    "INFINITY",
    "PrivateKey",
    "PublicKey",
    "SECP256K1",
    "Signature",
    "TOY",
    "address_matches",
    "as_digest",
    "b58decode",
    "b58encode",
    "base58check_decode",
    "base58check_encode",
    "collision_probability",
    "decode_address",
    "derive_address",
    "derive_public",
    "double_sha256",
    "ec_add",
    "enumerate_points",
    "generate_private",
    "get_curve",
    "hash160",
    "key_space_size",
    "load_key",
    "parse_point",
    "ripemd160",
    "save_key",
    "scalar_mul",
    "serialize_point",
    "sha256",
    "sign",
    "smallest_majority_collision_count",
    "verify",
]
