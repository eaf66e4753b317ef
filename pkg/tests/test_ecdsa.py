"""Signing against hand-evaluated equations and an independent verifier."""

import os

import pytest

from ags.crypto import (
    SECP256K1,
    TOY,
    CryptoError,
    PrivateKey,
    PublicKey,
    Signature,
    derive_public,
    generate_private,
    load_key,
    save_key,
    scalar_mul,
    sha256,
    sign,
    verify,
)
from ags.crypto.ecdsa import _derive_nonce

from .oracles import textbook_sign, textbook_verify


def digest_for_int(value: int) -> bytes:
    """A 32-byte digest whose integer value mod n is controllable."""
    return value.to_bytes(32, "big")


def test_derive_public_identities():
    assert derive_public(PrivateKey(1, TOY)).point == TOY.G
    assert derive_public(PrivateKey(1, SECP256K1)).point == SECP256K1.G
    assert derive_public(PrivateKey(2, TOY)).point == scalar_mul(2, TOY.G, TOY)


def test_toy_exhaustive_sign_matches_hand_equations():
    for d in range(1, TOY.n):
        priv = PrivateKey(d, TOY)
        pub = derive_public(priv)
        for z_int in range(TOY.n):
            z = digest_for_int(z_int)
            sig = sign(priv, z)
            # recompute by direct evaluation of r = (kG).x mod n and
            # s = k^-1 (z + r d) mod n with independent affine arithmetic
            for counter in range(128):
                k = _derive_nonce(priv, z, counter)
                r, s = textbook_sign(d, z_int, k, TOY)
                if r and s:
                    break
            assert (sig.r, sig.s) == (r, s)
            assert verify(pub, z, sig)
            assert textbook_verify(pub.point.x, pub.point.y, z_int, sig.r, sig.s, TOY)


def test_sign_is_deterministic():
    priv = PrivateKey(11, TOY)
    z = sha256(b"determinism")
    assert sign(priv, z) == sign(priv, z)
    big = PrivateKey(0xDEADBEEF, SECP256K1)
    assert sign(big, z).to_bytes(SECP256K1) == sign(big, z).to_bytes(SECP256K1)


def test_verify_rejects_flipped_message_bits():
    # needs the real curve: on the 19-point toy group a mutated digest
    # still verifies with probability ~1/19
    priv = PrivateKey(0xA11CE, SECP256K1)
    pub = derive_public(priv)
    z = sha256(b"original")
    sig = sign(priv, z)
    for bit in range(0, 256, 7):
        mutated = bytearray(z)
        mutated[bit // 8] ^= 1 << (bit % 8)
        assert not verify(pub, bytes(mutated), sig)


def test_verify_rejects_swapped_components():
    # toy curve: direct evaluation, agreeing with the independent oracle
    priv = PrivateKey(5, TOY)
    pub = derive_public(priv)
    rejected = 0
    for z_int in range(TOY.n):
        z = digest_for_int(z_int)
        sig = sign(priv, z)
        if sig.r == sig.s:
            continue
        swapped = Signature(sig.s, sig.r)
        ours = verify(pub, z, swapped)
        oracle = textbook_verify(pub.point.x, pub.point.y, z_int, swapped.r, swapped.s, TOY)
        assert ours == oracle
        rejected += not ours
    assert rejected > 0
    # real curve: swapping always rejects in practice
    big = PrivateKey(0xFEEDFACE, SECP256K1)
    big_pub = derive_public(big)
    for i in range(5):
        z = sha256(bytes([i]))
        sig = sign(big, z)
        assert not verify(big_pub, z, Signature(sig.s, sig.r))


def test_verify_rejects_out_of_range_components_without_raising():
    priv = PrivateKey(5, TOY)
    pub = derive_public(priv)
    z = sha256(b"range")
    sig = sign(priv, z)
    for bad in (0, TOY.n, TOY.n + 5, -1):
        assert verify(pub, z, Signature(bad, sig.s)) is False
        assert verify(pub, z, Signature(sig.r, bad)) is False


def test_secp256k1_round_trips_and_oracle():
    for i in range(8):
        priv = generate_private(SECP256K1)
        pub = derive_public(priv)
        z = sha256(os.urandom(32))
        sig = sign(priv, z)
        assert verify(pub, z, sig)
        z_int = int.from_bytes(z, "big")
        assert textbook_verify(pub.point.x, pub.point.y, z_int, sig.r, sig.s, SECP256K1)


def test_signature_wire_form():
    priv = PrivateKey(0x1234, SECP256K1)
    z = sha256(b"wire")
    sig = sign(priv, z)
    raw = sig.to_bytes(SECP256K1)
    assert len(raw) == 64
    assert Signature.from_bytes(raw, SECP256K1) == sig
    toy_sig = sign(PrivateKey(3, TOY), z)
    assert len(toy_sig.to_bytes(TOY)) == 2
    with pytest.raises(CryptoError):
        Signature.from_bytes(raw[:-1], SECP256K1)
    with pytest.raises(CryptoError):
        Signature(0, 1).to_bytes(TOY)


def test_mutated_signature_bytes_reject():
    priv = PrivateKey(0x55AA, SECP256K1)
    pub = derive_public(priv)
    z = sha256(b"mutation sweep")
    raw = bytearray(sign(priv, z).to_bytes(SECP256K1))
    for byte_index in range(0, len(raw), 7):
        mutated = bytearray(raw)
        mutated[byte_index] ^= 0x40
        sig = Signature.from_bytes(bytes(mutated), SECP256K1)
        assert not verify(pub, z, sig)


def test_private_key_range_enforced():
    with pytest.raises(CryptoError):
        PrivateKey(0, TOY)
    with pytest.raises(CryptoError):
        PrivateKey(TOY.n, TOY)
    PrivateKey(TOY.n - 1, TOY)


def test_public_key_must_be_on_curve():
    with pytest.raises(CryptoError):
        PublicKey(scalar_mul(0, TOY.G, TOY), TOY)  # infinity


def test_key_file_round_trip(tmp_path):
    path = tmp_path / "actor.key"
    priv = generate_private(SECP256K1)
    save_key(path, priv)
    loaded = load_key(path)
    assert loaded.d == priv.d and loaded.curve is SECP256K1
    toy_path = tmp_path / "toy.key"
    save_key(toy_path, PrivateKey(7, TOY))
    assert load_key(toy_path).d == 7
    assert len(toy_path.read_text().split('"d": "')[1].split('"')[0]) == 64
    path.write_text("{}")
    with pytest.raises(CryptoError):
        load_key(path)
